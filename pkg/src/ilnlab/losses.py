"""Margin-based losses, subgradients, and the label-gap constant per
(loss, hypothesis space) pairing.

The gap constant is the uniform bound on |l(f(x), +1) - l(f(x), -1)| over the
space's attainable scores; it is what multiplies the noise level in every
upper bound downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["LossSpec", "loss_eval", "margin_subgradient", "gap_constant",
           "loss_range", "sgn"]

KINDS = ("zero_one", "logistic", "hinge", "squared_margin")


def sgn(score):
    """Sign with the global tie-break sgn(0) = +1."""
    return np.where(np.asarray(score) >= 0, 1, -1)


@dataclass(frozen=True)
class LossSpec:
    """A loss by name plus its Lipschitz constant (None = unbounded).

    All kinds except zero_one are margin losses l(y * f(x)); zero_one is
    1{sgn(f(x)) != y} with sgn(0) = +1.
    """

    kind: str
    lipschitz: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.lipschitz is None and self.kind in ("logistic", "hinge"):
            object.__setattr__(self, "lipschitz", 1.0)
        if self.kind == "zero_one":
            object.__setattr__(self, "lipschitz", None)
        if self.kind == "squared_margin":
            # Lipschitz only on bounded scores; resolved per space in
            # gap_constant via the effective constant 2 * (1 + score bound)
            object.__setattr__(self, "lipschitz", None)

    @classmethod
    def from_name(cls, name: str) -> "LossSpec":
        return cls(kind=name)


def loss_eval(spec: LossSpec, score, label):
    """Evaluate the loss at a real score for labels in {-1, +1}."""
    score = np.asarray(score, dtype=float)
    label = np.asarray(label)
    if not np.all(np.isin(label, (-1, 1))):
        raise ValueError("labels must be +/-1")
    z = label * score
    if spec.kind == "zero_one":
        out = (sgn(score) != label).astype(float)
    elif spec.kind == "logistic":
        out = np.logaddexp(0.0, -z)
    elif spec.kind == "hinge":
        out = np.maximum(0.0, 1.0 - z)
    else:  # squared_margin
        out = (1.0 - z) ** 2
    return out if out.ndim else float(out)


def margin_subgradient(spec: LossSpec, z):
    """Subgradient of the margin form l(z) at z = y * f(x) (convex kinds only)."""
    z = np.asarray(z, dtype=float)
    if spec.kind == "logistic":
        return -1.0 / (1.0 + np.exp(z))
    if spec.kind == "hinge":
        return np.where(z < 1.0, -1.0, 0.0)
    if spec.kind == "squared_margin":
        return -2.0 * (1.0 - z)
    raise ValueError(f"{spec.kind} has no usable subgradient")


def _score_bound(space) -> float | None:
    bound = getattr(space, "score_bound", None)
    if bound is None:
        return None
    return bound() if callable(bound) else float(bound)


def gap_constant(spec: LossSpec, space) -> float:
    """Uniform bound C on |l(f(x),+1) - l(f(x),-1)| over the space.

    zero_one: C = 1 for any space. L-Lipschitz margin loss with score bound s:
    C = 2 L s. squared_margin uses the effective constant L = 2(1 + s).
    """
    if spec.kind == "zero_one":
        return 1.0
    s = _score_bound(space)
    if s is None:
        raise ValueError(f"{type(space).__name__} provides no score bound")
    if spec.kind == "squared_margin":
        return 2.0 * (2.0 * (1.0 + s)) * s
    return 2.0 * spec.lipschitz * s


def loss_range(spec: LossSpec, score_bound: float) -> tuple[float, float]:
    """(min, max) of the loss over |score| <= score_bound, both labels."""
    s = float(score_bound)
    if s < 0:
        raise ValueError("score bound must be non-negative")
    if spec.kind == "zero_one":
        return 0.0, 1.0
    if spec.kind == "logistic":
        return math.log1p(math.exp(-s)), np.logaddexp(0.0, s)
    if spec.kind == "hinge":
        return max(0.0, 1.0 - s), 1.0 + s
    # squared_margin: (1 - z)^2 over z in [-s, s]
    lo = 0.0 if s >= 1.0 else (1.0 - s) ** 2
    return lo, (1.0 + s) ** 2
