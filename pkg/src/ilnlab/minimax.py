"""Exact realization of the three-point Fano construction: a pair of clean
distributions over {a, b, c} whose noisy views coincide, so no estimator can
tell them apart from noisy samples alone.

All construction probabilities are kept as exact rationals internally; the
indistinguishability check and the estimator-independent excess-risk identity
are verified by full enumeration of the noisy n-sample outcome space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distributions import (FiniteDistribution, NoiseModel, check_anchor,
                            check_margin, noisy_posterior)

__all__ = ["ConstructionPair", "build_construction", "verify_indistinguishable",
           "bayes_risk01", "estimator_excess_sum", "constant_estimator",
           "majority_at_b_estimator", "random_table_estimator",
           "empirical_excess_sum", "ENUMERATION_CAP"]

DOMAIN = ("a", "b", "c")
MARGINAL = (Fraction(1, 8), Fraction(3, 4), Fraction(1, 8))
ENUMERATION_CAP = 8  # 6^8 ~ 1.7M weighted outcomes

# outcome alphabet for one noisy draw: (point, noisy label)
OUTCOMES = tuple((x, s) for x in DOMAIN for s in (-1, 1))


@dataclass(frozen=True)
class ConstructionPair:
    """The two clean distributions P-, P+ plus their (identical) noisy view.

    Posteriors: eta(a) = 1, eta(c) = 0 on both sides; eta+(b) = 1/(2 - rho),
    eta-(b) = (1 - rho)/(2 - rho). Noise at b flips only the majority label
    with probability rho/2; the anchors a and c carry zero noise.
    """

    rho: float
    eta_minus: dict
    eta_plus: dict
    noise_minus: dict
    noise_plus: dict
    eta_tilde: dict

    def eta(self, side: str) -> dict:
        return self.eta_plus if side == "+" else self.eta_minus

    def clean_distribution(self, side: str) -> FiniteDistribution:
        eta = self.eta(side)
        return FiniteDistribution(DOMAIN, [float(m) for m in MARGINAL],
                                  [float(eta[x]) for x in DOMAIN])

    def noise_model(self, side: str) -> NoiseModel:
        table = self.noise_plus if side == "+" else self.noise_minus
        rates = {x: (float(rp), float(rm)) for x, (rp, rm) in table.items()}
        return NoiseModel.table(rates, rho_bound=float(self.rho) / 2)

    def margin_at_b(self) -> float:
        """|2 eta(b) - 1|, identical for both sides."""
        return float(abs(2 * self.eta_plus["b"] - 1))

    def single_draw_law(self, side: str) -> dict:
        """Exact law of one noisy draw (point, noisy label) for one side."""
        eta = self.eta(side)
        table = self.noise_plus if side == "+" else self.noise_minus
        law = {}
        for x, mass in zip(DOMAIN, MARGINAL):
            rp, rm = table[x]
            et = (1 - rp) * eta[x] + rm * (1 - eta[x])
            law[(x, 1)] = mass * et
            law[(x, -1)] = mass * (1 - et)
        return law

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "domain": list(DOMAIN),
            "marginal": [float(m) for m in MARGINAL],
            "eta_minus": {x: float(v) for x, v in self.eta_minus.items()},
            "eta_plus": {x: float(v) for x, v in self.eta_plus.items()},
            "eta_tilde": {x: float(v) for x, v in self.eta_tilde.items()},
            "noise_plus": {x: [float(v) for v in t]
                           for x, t in self.noise_plus.items()},
            "noise_minus": {x: [float(v) for v in t]
                            for x, t in self.noise_minus.items()},
            "margin_at_b": self.margin_at_b(),
        }


def build_construction(rho: float) -> ConstructionPair:
    """Build the pair for a noise level rho in (0, 1), verifying every
    identity of the construction at build time."""
    if not (0 < rho < 1):
        raise ValueError("rho must lie in (0, 1)")
    r = Fraction(rho)
    one, zero = Fraction(1), Fraction(0)
    eta_plus = {"a": one, "b": 1 / (2 - r), "c": zero}
    eta_minus = {"a": one, "b": (1 - r) / (2 - r), "c": zero}
    noise_plus = {"a": (zero, zero), "b": (r / 2, zero), "c": (zero, zero)}
    noise_minus = {"a": (zero, zero), "b": (zero, r / 2), "c": (zero, zero)}

    eta_tilde = {}
    for x in DOMAIN:
        tp = noisy_posterior(eta_plus[x], *noise_plus[x])
        tm = noisy_posterior(eta_minus[x], *noise_minus[x])
        if tp != tm:
            raise AssertionError(f"noisy posteriors disagree at {x}")
        eta_tilde[x] = tp
    if eta_tilde["b"] != Fraction(1, 2):
        raise AssertionError("noisy posterior at b must be exactly 1/2")
    for eta in (eta_plus, eta_minus):
        if abs(2 * eta["b"] - 1) != r / (2 - r):
            raise AssertionError("margin at b must equal rho / (2 - rho)")

    pair = ConstructionPair(rho=float(rho), eta_minus=eta_minus,
                            eta_plus=eta_plus, noise_minus=noise_minus,
                            noise_plus=noise_plus, eta_tilde=eta_tilde)

    for side in ("-", "+"):
        dist = pair.clean_distribution(side)
        anchors = check_anchor(dist)
        if not (anchors.has_pos_anchor and anchors.has_neg_anchor):
            raise AssertionError("construction must satisfy the anchor assumption")
        if not check_margin(dist, alpha=0.0, c_alpha=1.0).ok:
            raise AssertionError("construction must satisfy the margin assumption")
    return pair


def _law_vectors(pair: ConstructionPair):
    law_m = pair.single_draw_law("-")
    law_p = pair.single_draw_law("+")
    return ([law_m[o] for o in OUTCOMES], [law_p[o] for o in OUTCOMES])


def verify_indistinguishable(pair: ConstructionPair, n: int) -> dict:
    """KL divergence and total variation between the two n-fold noisy sample
    laws, by exact enumeration over all 6^n outcomes."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > ENUMERATION_CAP:
        raise ValueError(f"n > {ENUMERATION_CAP} is too large for enumeration")
    if n == 0:
        return {"kl": 0.0, "tv": 0.0}
    pm, pp = _law_vectors(pair)
    kl_float = 0.0
    tv = Fraction(0)
    for seq in itertools.product(range(6), repeat=n):
        p = math.prod((pm[i] for i in seq), start=Fraction(1))
        q = math.prod((pp[i] for i in seq), start=Fraction(1))
        tv += abs(p - q)
        if p != q and p > 0:
            kl_float += float(p) * math.log(float(p) / float(q))
    return {"kl": kl_float, "tv": float(tv) / 2}


def bayes_risk01(pair: ConstructionPair, side: str) -> float:
    """Minimum clean misclassification rate: sum_x P(x) min(eta, 1 - eta)."""
    eta = pair.eta(side)
    total = sum(mass * min(eta[x], 1 - eta[x])
                for x, mass in zip(DOMAIN, MARGINAL))
    return float(total)


def constant_estimator(sign: int):
    if sign not in (-1, 1):
        raise ValueError("sign must be +/-1")
    return lambda sample: sign


def majority_at_b_estimator():
    def est(sample):
        votes = sum(s for x, s in sample if x == "b")
        return 1 if votes >= 0 else -1
    return est


def random_table_estimator(n: int, seed: int):
    """A deterministic estimator drawn at random: an arbitrary fixed map from
    n-sample outcome sequences to signs."""
    rng = np.random.default_rng(seed)
    signs = rng.choice((-1, 1), size=6 ** n)
    index = {o: i for i, o in enumerate(OUTCOMES)}

    def est(sample):
        code = 0
        for o in sample:
            code = code * 6 + index[o]
        return int(signs[code])
    return est


def estimator_excess_sum(pair: ConstructionPair, est, n: int) -> float:
    """Exact sum over both sides of the expected excess 0-1 risk of the
    estimator's decision at b, enumerating all 6^n weighted outcomes.

    Because the two noisy laws coincide, this equals P(b) * rho / (2 - rho)
    for every deterministic estimator.
    """
    if not (1 <= n <= ENUMERATION_CAP):
        raise ValueError(f"n must lie in [1, {ENUMERATION_CAP}]")
    pm, pp = _law_vectors(pair)
    wm = [float(v) for v in pm]
    wp = [float(v) for v in pp]
    margin = pair.margin_at_b()
    pb = float(MARGINAL[1])
    terms = []
    for seq in itertools.product(range(6), repeat=n):
        sample = tuple(OUTCOMES[i] for i in seq)
        decision = est(sample)
        if decision not in (-1, 1):
            raise ValueError("estimator output must be +/-1")
        if decision == -1:
            # missed under the + side
            terms.append(math.prod(wp[i] for i in seq))
        else:
            # missed under the - side
            terms.append(math.prod(wm[i] for i in seq))
    return pb * margin * math.fsum(terms)


def empirical_excess_sum(pair: ConstructionPair, n: int, seed: int) -> float:
    """Empirical counterpart: train exact 0-1 ERM on n noisy samples from each
    side and sum the excess clean risks. Concentrates on the enumeration value
    as the per-point sample sizes grow."""
    from .distributions import sample_dataset
    from .hypotheses import FiniteSignSpace, erm_zero_one_finite
    from .losses import LossSpec
    from .risk import exact_risk

    zero_one = LossSpec("zero_one")
    space = FiniteSignSpace(DOMAIN)
    total = 0.0
    for offset, side in enumerate(("-", "+")):
        dist = pair.clean_distribution(side)
        side_seed = int(seed) * 2 + offset
        data = sample_dataset(dist, pair.noise_model(side), n, side_seed)
        h = erm_zero_one_finite(data, "noisy", space)
        total += exact_risk(h, dist, None, zero_one) - bayes_risk01(pair, side)
    return total
