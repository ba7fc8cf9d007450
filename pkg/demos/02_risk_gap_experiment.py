"""The headline experiment: train one ERM on clean labels and one on noisy
labels (same loss, no correction), then measure how much clean risk the noisy
estimator gives up — and compare to the closed-form upper bound.

Run: python3 demos/02_risk_gap_experiment.py
"""

from ilnlab import (LossSpec, NoiseModel, SolverConfig, risk_gap_experiment)
from ilnlab.distributions import SyntheticDistribution
from ilnlab.hypotheses import LinearBallSpace

dist = SyntheticDistribution(means=[[0.2, 0.0]], variances=[0.7, 0.7],
                             weights=[1.0], radius=1.0, slope=[2.0, -1.0])
space = LinearBallSpace(dim=2, x_star=1.0, w_star=1.0)
spec = LossSpec("logistic")

print(f"{'rho':>5} {'gap':>10} {'bound':>8} {'gap01':>10}")
for rho in (0.0, 0.1, 0.2, 0.3):
    result = risk_gap_experiment(
        dist, NoiseModel.ccn(rho / 2, rho / 2), space, spec,
        SolverConfig(), n=2000, delta=0.05, seed=11, mc_draws=200_000)
    print(f"{rho:5.1f} {result.gap:10.5f} {result.bound_theorem1:8.3f} "
          f"{result.gap01:10.5f}")

print("\nNotes:")
print(" - the bound is 3 C rho + 2 G(n) with C = 2 L X* W* = 2 here;")
print("   it is loose but honest, and the measured gap sits far below it")
print(" - at rho = 0 the two estimators coincide, so the gap is exactly 0")
print(" - gap01 is the same comparison under the 0-1 loss")
