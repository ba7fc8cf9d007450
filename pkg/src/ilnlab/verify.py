"""Verification suites: Monte-Carlo and enumeration oracles for the core
identities. Shared by the test suite and the `verify` CLI subcommand."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import FiniteDistribution, noisy_posterior
from .minimax import build_construction, estimator_excess_sum, \
    random_table_estimator

__all__ = ["lemma1_mc_check", "lemma1_transform_check",
           "clean_noisy_gap_enumeration_check", "estimator_sum_check",
           "SuiteReport"]


@dataclass
class SuiteReport:
    suite: str
    trials: int
    failures: int
    worst: float
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "trials": self.trials,
                "failures": self.failures, "worst": self.worst, "ok": self.ok,
                "detail": self.detail}


def _random_rates(rng: np.random.Generator, size=None, cap: float = 0.95):
    total = rng.uniform(0, cap, size=size)
    share = rng.uniform(0, 1, size=size)
    return total * share, total * (1 - share)


def lemma1_mc_check(trials: int = 1000, draws: int = 10 ** 6,
                    seed: int = 0, sigmas: float = 4.0,
                    max_fail_rate: float = 0.005) -> SuiteReport:
    """Formula vs Monte-Carlo flip frequency for random (eta, rho+, rho-).

    Simulates the two-stage label draw with exact binomial counts: the number
    of true +1 labels, then the surviving and flipped portions.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        eta = rng.uniform(0, 1)
        rp, rm = _random_rates(rng)
        expected = noisy_posterior(eta, rp, rm)
        k_pos = rng.binomial(draws, eta)
        kept = rng.binomial(k_pos, 1 - rp)
        gained = rng.binomial(draws - k_pos, rm)
        freq = (kept + gained) / draws
        sigma = math.sqrt(max(expected * (1 - expected), 1e-300) / draws)
        dev = abs(freq - expected) / sigma if sigma > 0 else abs(freq - expected)
        worst = max(worst, dev)
        if dev > sigmas:
            failures += 1
    return SuiteReport("lemma1_mc", trials, failures, worst,
                       ok=failures <= trials * max_fail_rate)


def lemma1_transform_check(trials: int = 200, seed: int = 0,
                           tol: float = 1e-12) -> SuiteReport:
    """Noisy exact risk must coincide with the clean exact risk of the
    pointwise-transformed distribution (eta replaced by eta~), to 1e-12."""
    from .distributions import NoiseModel
    from .hypotheses import FiniteSignSpace, SignTableHypothesis
    from .losses import LossSpec
    from .risk import exact_risk

    rng = np.random.default_rng(seed)
    zero_one = LossSpec("zero_one")
    failures = 0
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(2, 7))
        points = [f"p{i}" for i in range(k)]
        mass = rng.dirichlet(np.ones(k))
        mass = mass / mass.sum()
        eta = rng.uniform(0, 1, size=k)
        dist = FiniteDistribution(points, mass, eta)
        rp, rm = _random_rates(rng, size=k)
        noise = NoiseModel.table(
            {p: (rp[i], rm[i]) for i, p in enumerate(points)},
            rho_bound=float((rp + rm).max()))
        transformed = dist.with_posterior(noisy_posterior(eta, rp, rm))
        table = {p: int(s) for p, s in zip(points, rng.choice((-1, 1), size=k))}
        h = SignTableHypothesis(table, FiniteSignSpace(points))
        via_noise = exact_risk(h, dist, noise, zero_one)
        via_transform = exact_risk(h, transformed, None, zero_one)
        dev = abs(via_noise - via_transform)
        worst = max(worst, dev)
        if dev > tol:
            failures += 1
    return SuiteReport("lemma1_transform", trials, failures, worst,
                       ok=failures == 0)


def clean_noisy_gap_enumeration_check(trials: int = 200, seed: int = 0,
                                      max_support: int = 5) -> SuiteReport:
    """For random finite distributions and noise models, the worst sign table's
    clean-minus-noisy 0-1 risk difference must stay below (3/2) * mean noise
    sum (and hence below (3/2) * rho), checked by enumerating all sign tables.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst_margin = float("inf")
    for _ in range(trials):
        k = int(rng.integers(2, max_support + 1))
        mass = rng.dirichlet(np.ones(k))
        mass = mass / mass.sum()
        eta = rng.uniform(0, 1, size=k)
        rp, rm = _random_rates(rng, size=k)
        sums = rp + rm
        mean_sum = float(mass @ sums)
        eta_tilde = noisy_posterior(eta, rp, rm)
        # all 2^k sign tables at once: risk(f) = sum_x m(x) * err(f(x), eta')
        tables = np.array(np.meshgrid(*[[-1, 1]] * k, indexing="ij"),
                          dtype=float).reshape(k, -1).T
        pos = tables > 0
        clean = (np.where(pos, 1 - eta, eta) * mass).sum(axis=1)
        noisy = (np.where(pos, 1 - eta_tilde, eta_tilde) * mass).sum(axis=1)
        max_diff = float(np.max(clean - noisy))
        margin = 1.5 * mean_sum - max_diff
        worst_margin = min(worst_margin, margin)
        if max_diff > 1.5 * mean_sum + 1e-12 or mean_sum > sums.max() + 1e-12:
            failures += 1
    return SuiteReport("lemma2_enumeration", trials, failures, worst_margin,
                       ok=failures == 0,
                       detail={"bound_form": "1.5 * mean_sum"})


def estimator_sum_check(rhos=tuple(r / 10 for r in range(1, 10)),
                        ns=(1, 2, 3, 4), estimators_per_cell: int = 10,
                        seed: int = 0, tol: float = 1e-12) -> SuiteReport:
    """The two-sided excess-risk sum is the same for every deterministic
    estimator and equals P(b) * rho / (2 - rho), above rho/8 and rho/16."""
    failures = 0
    worst = 0.0
    trials = 0
    for rho in rhos:
        pair = build_construction(rho)
        target = 0.75 * rho / (2 - rho)
        for n in ns:
            for j in range(estimators_per_cell):
                est = random_table_estimator(n, seed=seed * 1000 + j)
                value = estimator_excess_sum(pair, est, n)
                trials += 1
                dev = abs(value - target)
                worst = max(worst, dev)
                if dev > tol or value < rho / 8 - tol or value < rho / 16 - tol:
                    failures += 1
    return SuiteReport("estimator_sum", trials, failures, worst,
                       ok=failures == 0)
