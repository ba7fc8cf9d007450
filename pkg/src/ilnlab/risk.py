"""Exact, empirical, and Monte-Carlo risk evaluation, plus the headline
clean-vs-noisy ERM risk-gap experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .distributions import (Dataset, FiniteDistribution, NoiseModel,
                            SyntheticDistribution, _eval_stream,
                            noisy_posterior, sample_dataset)
from .hypotheses import (FiniteSignSpace, LinearBallSpace, RKHSBallSpace,
                         SolverConfig, erm_convex, erm_zero_one_finite,
                         solver_tolerance)
from .losses import LossSpec, gap_constant, loss_eval, loss_range

__all__ = ["exact_risk", "empirical_risk", "mc_risk", "risk_gap_experiment",
           "RiskGapResult", "MCRiskEstimate"]


def _scores_on_support(h, dist: FiniteDistribution) -> np.ndarray:
    if hasattr(h, "table"):
        return h.score(dist.support)
    return h.score(np.asarray(dist.support, dtype=float))


def exact_risk(h, dist: FiniteDistribution, noise: NoiseModel | None,
               spec: LossSpec) -> float:
    """Exact risk on a finite distribution.

    With ``noise`` given, evaluates the noisy risk through the transformed
    posterior eta~ rather than by sampling.
    """
    if not isinstance(dist, FiniteDistribution):
        raise TypeError("exact_risk requires a finite distribution")
    eta = dist.posterior
    if noise is not None:
        rp, rm = noise.rates(list(dist.support))
        noise.check_sums(rp, rm)
        eta = noisy_posterior(eta, rp, rm)
    scores = _scores_on_support(h, dist)
    lp = loss_eval(spec, scores, np.ones_like(scores))
    lm = loss_eval(spec, scores, -np.ones_like(scores))
    return float(np.dot(dist.mass, eta * lp + (1 - eta) * lm))


def empirical_risk(h, data: Dataset, spec: LossSpec, label_channel: str) -> float:
    """Mean loss over the dataset rows on the chosen label channel."""
    if len(data) == 0:
        raise ValueError("empty dataset")
    y = data.labels(label_channel)
    if hasattr(h, "table"):
        scores = h.score(data.x)
    else:
        x = np.asarray(data.x, dtype=float)
        scores = h.score(x if x.ndim == 2 else x[:, None])
    return float(np.mean(loss_eval(spec, scores, y)))


@dataclass(frozen=True)
class MCRiskEstimate:
    estimate: float
    ci_half_width: float


def mc_risk(h, dist: SyntheticDistribution, noise: NoiseModel | None,
            spec: LossSpec, m: int, delta: float, seed: int) -> MCRiskEstimate:
    """Monte-Carlo risk with a Hoeffding interval B sqrt(log(2/delta) / 2m).

    The loss range B comes from the hypothesis space's score bound; an
    unbounded range is rejected.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not (0 < delta <= 1):
        raise ValueError("delta must lie in (0, 1]")
    s = h.space.score_bound()
    lo, hi = loss_range(spec, s)
    b = hi - lo
    if not math.isfinite(b):
        raise ValueError("loss range is unbounded on this space")
    rng = _eval_stream(seed)
    x = dist.sample_x(rng, m)
    eta = dist.eta(x)
    if noise is not None:
        rp, rm = noise.rates(x)
        noise.check_sums(rp, rm)
        eta = noisy_posterior(eta, rp, rm)
    y = np.where(rng.random(m) < eta, 1, -1)
    est = float(np.mean(loss_eval(spec, h.score(x), y)))
    ci = b * math.sqrt(math.log(2 / delta) / (2 * m))
    return MCRiskEstimate(estimate=est, ci_half_width=ci)


@dataclass(frozen=True)
class RiskGapResult:
    clean_risk_of_clean_erm: float
    clean_risk_of_noisy_erm: float
    gap: float
    clean_risk01_of_clean_erm: float
    clean_risk01_of_noisy_erm: float
    gap01: float
    bound_theorem1: float
    g_delta: float
    C: float
    rho: float
    n: int
    seed: int
    solver_tol: float
    eval_ci: float
    delta: float

    def __post_init__(self):
        expected = self.clean_risk_of_noisy_erm - self.clean_risk_of_clean_erm
        if self.gap != expected:
            raise ValueError("gap must equal the risk difference exactly")

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}


def _g_for(space, spec: LossSpec, n: int, delta: float) -> float:
    if isinstance(space, LinearBallSpace):
        setting = bounds.LinearSetting(spec.lipschitz or 1.0, space.x_star,
                                       space.w_star)
    elif isinstance(space, RKHSBallSpace):
        setting = bounds.RKHSSetting(spec.lipschitz or 1.0, space.kernel_bound,
                                     space.norm_cap)
    elif isinstance(space, FiniteSignSpace):
        setting = bounds.FiniteSetting(num_hypotheses=2 ** len(space.domain))
    else:
        raise TypeError(f"no G_delta envelope for {type(space).__name__}")
    return bounds.g_delta(setting, n, delta)


def risk_gap_experiment(dist, noise: NoiseModel, space, spec: LossSpec,
                        cfg: SolverConfig, n: int, delta: float,
                        seed: int, mc_draws: int = 10 ** 6) -> RiskGapResult:
    """Train the clean and noisy ERM on one paired dataset and measure
    R(noisy erm) - R(clean erm) under the clean distribution, alongside the
    main upper bound 3 C rho + 2 G_delta(n)."""
    data = sample_dataset(dist, noise, n, seed)
    zero_one = LossSpec("zero_one")

    if isinstance(space, FiniteSignSpace):
        if spec.kind != "zero_one":
            raise ValueError("finite sign spaces pair with the zero_one loss")
        f_clean = erm_zero_one_finite(data, "clean", space)
        f_noisy = erm_zero_one_finite(data, "noisy", space)
        solver_tol = 0.0
    else:
        f_clean = erm_convex(data, "clean", space, spec, cfg)
        f_noisy = erm_convex(data, "noisy", space, spec, cfg)
        solver_tol = solver_tolerance(space, spec, cfg)

    if isinstance(dist, FiniteDistribution):
        r_clean = exact_risk(f_clean, dist, None, spec)
        r_noisy = exact_risk(f_noisy, dist, None, spec)
        r01_clean = exact_risk(f_clean, dist, None, zero_one)
        r01_noisy = exact_risk(f_noisy, dist, None, zero_one)
        eval_ci = 0.0
    else:
        # shared evaluation stream pairs the draws across both hypotheses
        est_c = mc_risk(f_clean, dist, None, spec, mc_draws, delta, seed)
        est_n = mc_risk(f_noisy, dist, None, spec, mc_draws, delta, seed)
        r_clean, r_noisy = est_c.estimate, est_n.estimate
        r01_clean = mc_risk(f_clean, dist, None, zero_one, mc_draws, delta,
                            seed).estimate
        r01_noisy = mc_risk(f_noisy, dist, None, zero_one, mc_draws, delta,
                            seed).estimate
        eval_ci = est_c.ci_half_width

    c = gap_constant(spec, space)
    g = _g_for(space, spec, n, delta)
    thm1 = bounds.bound("theorem1", C=c, rho=noise.rho_bound, g=g, delta=delta)
    return RiskGapResult(
        clean_risk_of_clean_erm=r_clean,
        clean_risk_of_noisy_erm=r_noisy,
        gap=r_noisy - r_clean,
        clean_risk01_of_clean_erm=r01_clean,
        clean_risk01_of_noisy_erm=r01_noisy,
        gap01=r01_noisy - r01_clean,
        bound_theorem1=thm1.value,
        g_delta=g,
        C=c,
        rho=noise.rho_bound,
        n=n,
        seed=int(seed),
        solver_tol=solver_tol,
        eval_ci=eval_ci,
        delta=delta,
    )
