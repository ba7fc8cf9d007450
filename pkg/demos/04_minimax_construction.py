"""The three-point hard instance: two clean distributions whose noisy views
are identical, so no learner can tell from noisy data which one it faces —
and must pay the margin at b on one of them.

Run: python3 demos/04_minimax_construction.py
"""

from ilnlab import (bayes_risk01, build_construction, estimator_excess_sum,
                    verify_indistinguishable)
from ilnlab.minimax import (constant_estimator, empirical_excess_sum,
                            majority_at_b_estimator, random_table_estimator)

rho = 0.4
pair = build_construction(rho)

print(f"construction at rho = {rho}")
print("  point   mass   eta-    eta+    noisy eta")
for x, mass in zip(("a", "b", "c"), (0.125, 0.75, 0.125)):
    print(f"  {x:>5} {mass:6.3f} {float(pair.eta_minus[x]):6.3f} "
          f"{float(pair.eta_plus[x]):7.3f} {float(pair.eta_tilde[x]):8.3f}")
print(f"  margin at b: {pair.margin_at_b():.4f}  (= rho / (2 - rho))")
print(f"  Bayes 0-1 risk, either side: {bayes_risk01(pair, '+'):.5f}")

print("\nindistinguishability of the n-sample noisy laws (exact enumeration)")
for n in (1, 2, 4):
    div = verify_indistinguishable(pair, n)
    print(f"  n={n}: kl={div['kl']}  tv={div['tv']}")

print("\nexcess-risk sum over both sides -- identical for every estimator")
estimators = {
    "always +1": constant_estimator(1),
    "always -1": constant_estimator(-1),
    "majority vote at b": majority_at_b_estimator(),
    "random lookup table": random_table_estimator(3, seed=42),
}
for name, est in estimators.items():
    value = estimator_excess_sum(pair, est, n=3)
    print(f"  {name:>20}: {value:.10f}")
print(f"  identity value 0.75 rho / (2 - rho) = {0.75 * rho / (2 - rho)}")
print(f"  floors: rho/8 = {rho / 8}, rho/16 = {rho / 16}")

print("\nempirical witness: exact 0-1 ERM on noisy samples, both sides")
for n in (100, 1000, 10000):
    mean = sum(empirical_excess_sum(pair, n, seed)
               for seed in range(20)) / 20
    print(f"  n={n:>6}: mean two-sided excess over 20 seeds = {mean:.4f}")
