"""Closed-form bounds: uniform-deviation envelopes G_delta and every
risk-gap / lower-bound formula, evaluated verbatim as published.

Where the published proposition is looser than direct substitution of the
G_delta envelope into the main risk-gap bound, both values are reported
("value" = published, extras["substituted"] = direct substitution) so the
slack stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["LinearSetting", "RKHSSetting", "FiniteSetting", "g_delta",
           "bound", "BoundReport", "BOUND_KINDS"]

BOUND_KINDS = ("lemma2", "theorem1", "corollary1", "prop_linear", "prop_rkhs",
               "theorem2_lower", "lemma6_lower")


@dataclass(frozen=True)
class LinearSetting:
    """L-Lipschitz margin loss, linear ball (x_star, w_star)."""

    lipschitz: float = 1.0
    x_star: float = 1.0
    w_star: float = 1.0

    @property
    def scale(self) -> float:
        return self.lipschitz * self.x_star * self.w_star


@dataclass(frozen=True)
class RKHSSetting:
    """L-Lipschitz margin loss, RKHS ball of radius norm_cap, k(x,x) <= R^2."""

    lipschitz: float = 1.0
    kernel_bound: float = 1.0
    norm_cap: float = 1.0

    @property
    def scale(self) -> float:
        return self.lipschitz * self.kernel_bound * self.norm_cap


@dataclass(frozen=True)
class FiniteSetting:
    """Finite hypothesis class: Hoeffding + union bound over all members.

    Not one of the published envelopes; used for exact 0-1 ERM over finite
    sign tables, where |F| = 2^|domain| and the loss range is 1.
    """

    num_hypotheses: int
    loss_range: float = 1.0


def g_delta(setting, n: int, delta: float) -> float:
    """Uniform deviation envelope sup_F |R - R_n| at confidence 1 - delta."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0 < delta <= 1):
        raise ValueError("delta must lie in (0, 1]")
    if isinstance(setting, LinearSetting):
        s = setting.scale
        return 2 * s * math.sqrt(1 / n) + s * math.sqrt(math.log(1 / delta) / (2 * n))
    if isinstance(setting, RKHSSetting):
        s = setting.scale
        return 2 * s * (math.sqrt(1 / n) + math.sqrt(math.log(2 / delta) / (2 * n)))
    if isinstance(setting, FiniteSetting):
        m = setting.num_hypotheses
        return setting.loss_range * math.sqrt(math.log(2 * m / delta) / (2 * n))
    raise TypeError(f"unknown setting {type(setting).__name__}")


@dataclass(frozen=True)
class BoundReport:
    kind: str
    inputs: dict
    value: float
    confidence: float
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("bound value must be non-negative")
        if not (0 < self.confidence <= 1):
            raise ValueError("confidence must lie in (0, 1]")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "inputs": self.inputs, "value": self.value,
                "confidence": self.confidence, "extras": self.extras}


def _require(inputs: dict, *names):
    missing = [k for k in names if inputs.get(k) is None]
    if missing:
        raise ValueError(f"missing inputs for bound: {missing}")
    return [inputs[k] for k in names]


def bound(kind: str, **inputs) -> BoundReport:
    """Evaluate one named bound formula.

    Accepted inputs by kind:
      lemma2: C, rho             -> (3/2) C rho, holds surely
      theorem1: C, rho, g        -> 3 C rho + 2 g, confidence 1 - 2 delta
      corollary1: C, rho, g      -> 3 C rho + 4 g, confidence 1 - 4 delta
      prop_linear: rho, n, delta, [lipschitz, x_star, w_star]
      prop_rkhs: rho, n, delta, [lipschitz, kernel_bound, norm_cap]
      theorem2_lower: rho        -> rho / 16
      lemma6_lower: rho          -> rho / 8
    """
    if kind not in BOUND_KINDS:
        raise ValueError(f"unknown bound kind {kind!r}")
    rho = inputs.get("rho")
    if rho is None:
        raise ValueError("missing inputs for bound: ['rho']")
    if not (0 <= rho < 1):
        raise ValueError("rho must lie in [0, 1)")
    delta = inputs.get("delta")

    if kind == "lemma2":
        (c,) = _require(inputs, "C")
        return BoundReport(kind, inputs, 1.5 * c * rho, 1.0)
    if kind == "theorem1":
        c, g = _require(inputs, "C", "g")
        conf = 1 - 2 * delta if delta is not None else 1.0
        return BoundReport(kind, inputs, 3 * c * rho + 2 * g, conf)
    if kind == "corollary1":
        c, g = _require(inputs, "C", "g")
        conf = 1 - 4 * delta if delta is not None else 1.0
        return BoundReport(kind, inputs, 3 * c * rho + 4 * g, conf)
    if kind == "prop_linear":
        n, delta = _require(inputs, "n", "delta")
        setting = LinearSetting(inputs.get("lipschitz", 1.0),
                                inputs.get("x_star", 1.0),
                                inputs.get("w_star", 1.0))
        s = setting.scale
        published = 2 * s * (3 * rho + 2 * math.sqrt(1 / n)
                             + math.sqrt(2 * math.log(1 / delta) / n))
        substituted = 3 * (2 * s) * rho + 2 * g_delta(setting, n, delta)
        return BoundReport(kind, inputs, published, 1 - 4 * delta,
                           extras={"substituted": substituted,
                                   "published_over_substituted_third_term": 2.0})
    if kind == "prop_rkhs":
        n, delta = _require(inputs, "n", "delta")
        setting = RKHSSetting(inputs.get("lipschitz", 1.0),
                              inputs.get("kernel_bound", 1.0),
                              inputs.get("norm_cap", 1.0))
        s = setting.scale
        published = 2 * s * (3 * rho + 2 * math.sqrt(1 / n)
                             + math.sqrt(math.log(2 / delta) / (2 * n)))
        substituted = 3 * (2 * s) * rho + 2 * g_delta(setting, n, delta)
        return BoundReport(kind, inputs, published, 1 - 4 * delta,
                           extras={"substituted": substituted})
    if kind == "theorem2_lower":
        return BoundReport(kind, inputs, rho / 16, 1.0)
    # lemma6_lower
    return BoundReport(kind, inputs, rho / 8, 1.0)
