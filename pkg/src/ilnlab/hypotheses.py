"""Hypothesis spaces and the two ERM procedures (clean vs noisy labels).

Convex ERM over norm balls uses projected subgradient descent with step
c / sqrt(t) and uniform iterate averaging. Zero-one ERM over a finite domain
is exact (per-point majority vote). The same loss is used for both label
channels; no noise correction of any kind is applied.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import Dataset, point_key
from .losses import LossSpec, loss_eval, margin_subgradient, sgn

__all__ = [
    "LinearBallSpace", "RKHSBallSpace", "FiniteSignSpace",
    "LinearHypothesis", "KernelHypothesis", "SignTableHypothesis",
    "SolverConfig", "erm_convex", "erm_zero_one_finite", "predict",
    "rbf_kernel", "solver_tolerance",
]

_NORM_SLACK = 1e-9


@dataclass(frozen=True)
class LinearBallSpace:
    """F = {x -> w.x : ||w||_2 <= w_star} over the ball ||x||_2 <= x_star."""

    dim: int
    x_star: float
    w_star: float

    def __post_init__(self):
        if self.dim < 1 or self.x_star <= 0 or self.w_star <= 0:
            raise ValueError("dim >= 1 and positive radii required")

    def score_bound(self) -> float:
        return self.x_star * self.w_star

    def describe(self) -> dict:
        return {"kind": "linear_ball", "dim": self.dim,
                "x_star": self.x_star, "w_star": self.w_star}


@dataclass(frozen=True)
class RKHSBallSpace:
    """F = {f in H_rbf : ||f||_H <= norm_cap}; the rbf kernel has k(x,x) = 1."""

    bandwidth: float
    norm_cap: float
    kernel_bound: float = 1.0  # R, with k(x, x) <= R^2

    def __post_init__(self):
        if self.bandwidth <= 0 or self.norm_cap <= 0:
            raise ValueError("bandwidth and norm_cap must be positive")

    def score_bound(self) -> float:
        return self.kernel_bound * self.norm_cap

    def describe(self) -> dict:
        return {"kind": "rkhs_ball", "bandwidth": self.bandwidth,
                "norm_cap": self.norm_cap}


@dataclass(frozen=True)
class FiniteSignSpace:
    """All sign tables over a finite point domain; scores are +/-1."""

    domain: tuple

    def __init__(self, domain):
        object.__setattr__(self, "domain", tuple(point_key(p) for p in domain))

    def score_bound(self) -> float:
        return 1.0

    def describe(self) -> dict:
        return {"kind": "finite_sign", "domain": [str(k) for k in self.domain]}


def rbf_kernel(a: np.ndarray, b: np.ndarray, bandwidth: float) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    d2 = np.sum(a ** 2, axis=1)[:, None] + np.sum(b ** 2, axis=1)[None, :] \
        - 2.0 * (a @ b.T)
    return np.exp(-np.maximum(d2, 0.0) / (2.0 * bandwidth ** 2))


@dataclass(frozen=True)
class LinearHypothesis:
    weights: np.ndarray
    space: LinearBallSpace

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if np.linalg.norm(w) > self.space.w_star + _NORM_SLACK:
            raise ValueError("weight norm exceeds the ball radius")

    def score(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_2d(np.asarray(x, dtype=float)) @ self.weights

    def to_record(self) -> dict:
        return {"kind": "linear", "weights": self.weights.tolist(),
                "space": self.space.describe()}


@dataclass(frozen=True)
class KernelHypothesis:
    anchors: np.ndarray
    coefficients: np.ndarray
    space: RKHSBallSpace

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.anchors, dtype=float))
        c = np.asarray(self.coefficients, dtype=float)
        a.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "anchors", a)
        object.__setattr__(self, "coefficients", c)
        gram = rbf_kernel(a, a, self.space.bandwidth)
        if c @ gram @ c > self.space.norm_cap ** 2 + _NORM_SLACK:
            raise ValueError("RKHS norm exceeds the ball radius")

    def score(self, x: np.ndarray) -> np.ndarray:
        k = rbf_kernel(np.atleast_2d(np.asarray(x, dtype=float)), self.anchors,
                       self.space.bandwidth)
        return k @ self.coefficients

    def to_record(self) -> dict:
        return {"kind": "kernel", "anchors": self.anchors.tolist(),
                "coefficients": self.coefficients.tolist(),
                "space": self.space.describe()}


@dataclass(frozen=True)
class SignTableHypothesis:
    table: dict
    space: FiniteSignSpace

    def __post_init__(self):
        table = {point_key(k): int(v) for k, v in self.table.items()}
        if any(v not in (-1, 1) for v in table.values()):
            raise ValueError("table entries must be +/-1")
        object.__setattr__(self, "table", table)

    def score(self, xs) -> np.ndarray:
        return np.array([self.table[point_key(x)] for x in xs], dtype=float)

    def to_record(self) -> dict:
        return {"kind": "sign_table",
                "table": {str(k): v for k, v in sorted(self.table.items())},
                "space": self.space.describe()}


def predict(h, x) -> float:
    """Score of a hypothesis at one feature point; classify with sgn(score)."""
    if isinstance(h, SignTableHypothesis):
        try:
            return float(h.table[point_key(x)])
        except KeyError:
            raise KeyError(f"point {x!r} outside the hypothesis domain") from None
    x = np.atleast_1d(np.asarray(x, dtype=float))
    expected = h.space.dim if isinstance(h, LinearHypothesis) else h.anchors.shape[1]
    if x.shape != (expected,):
        raise ValueError(f"expected a {expected}-dimensional feature, got {x.shape}")
    return float(h.score(x[None, :])[0])


@dataclass(frozen=True)
class SolverConfig:
    """Projected subgradient settings: T iterations, step c / sqrt(t),
    uniform iterate averaging, norm-ball projection.

    ``step_scale`` defaults to the ball radius (W* or M) when None.
    """

    iterations: int = 2000
    step_scale: float | None = None

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.step_scale is not None and self.step_scale <= 0:
            raise ValueError("step_scale must be positive")

    def digest(self) -> str:
        return f"T{self.iterations}-c{self.step_scale}"


def solver_tolerance(space, spec: LossSpec, cfg: SolverConfig) -> float:
    """A priori bound on the suboptimality of the averaged iterate."""
    if isinstance(space, LinearBallSpace):
        radius, grad_bound = space.w_star, space.x_star
    elif isinstance(space, RKHSBallSpace):
        radius, grad_bound = space.norm_cap, space.kernel_bound
    else:
        return 0.0
    if spec.kind == "squared_margin":
        grad_bound *= 2.0 * (1.0 + space.score_bound())
    c = cfg.step_scale if cfg.step_scale is not None else radius
    t = cfg.iterations
    return (radius ** 2 / (2 * c) + c * grad_bound ** 2 * (1 + math.log(t)) / 2) \
        / math.sqrt(t)


def erm_convex(data: Dataset, label_channel: str, space, spec: LossSpec,
               cfg: SolverConfig = SolverConfig()):
    """Constrained convex ERM by projected subgradient with averaging.

    The label channel selects y (clean) or y~ (noisy); the loss itself is
    identical for both channels.
    """
    if spec.kind == "zero_one":
        raise ValueError("erm_convex requires a convex surrogate loss")
    if len(data) == 0:
        raise ValueError("empty dataset")
    y = data.labels(label_channel).astype(float)
    x = np.asarray(data.x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = len(y)

    if isinstance(space, LinearBallSpace):
        if x.shape[1] != space.dim:
            raise ValueError(f"data dimension {x.shape[1]} != space dim {space.dim}")
        radius = space.w_star
        c = cfg.step_scale if cfg.step_scale is not None else radius
        w = np.zeros(space.dim)
        avg = np.zeros(space.dim)
        for t in range(1, cfg.iterations + 1):
            z = y * (x @ w)
            g = (x.T @ (margin_subgradient(spec, z) * y)) / n
            w = w - (c / math.sqrt(t)) * g
            norm = np.linalg.norm(w)
            if norm > radius:
                w *= radius / norm
            avg += w
        return LinearHypothesis(weights=avg / cfg.iterations, space=space)

    if isinstance(space, RKHSBallSpace):
        gram = rbf_kernel(x, x, space.bandwidth)
        radius = space.norm_cap
        c = cfg.step_scale if cfg.step_scale is not None else radius
        alpha = np.zeros(n)
        avg = np.zeros(n)
        for t in range(1, cfg.iterations + 1):
            scores = gram @ alpha
            z = y * scores
            # functional gradient expressed in the span of the training points
            g = (margin_subgradient(spec, z) * y) / n
            alpha = alpha - (c / math.sqrt(t)) * g
            sq = alpha @ gram @ alpha
            if sq > radius ** 2:
                alpha *= radius / math.sqrt(sq)
            avg += alpha
        return KernelHypothesis(anchors=x, coefficients=avg / cfg.iterations,
                                space=space)

    raise TypeError(f"erm_convex does not support {type(space).__name__}")


def erm_zero_one_finite(data: Dataset, label_channel: str,
                        domain) -> SignTableHypothesis:
    """Exact empirical 0-1 risk minimizer over all sign tables on a finite
    domain: per-point majority vote on the selected channel, ties to +1."""
    space = domain if isinstance(domain, FiniteSignSpace) else FiniteSignSpace(domain)
    if len(data) == 0:
        raise ValueError("empty dataset")
    y = data.labels(label_channel)
    votes = {k: 0 for k in space.domain}
    for i in range(len(data)):
        k = point_key(data.x[i])
        if k not in votes:
            raise KeyError(f"feature {data.x[i]!r} outside the finite domain")
        votes[k] += int(y[i])
    table = {k: (1 if v >= 0 else -1) for k, v in votes.items()}
    return SignTableHypothesis(table=table, space=space)


def hypothesis_to_json(h, cfg: SolverConfig | None = None) -> str:
    record = h.to_record()
    if cfg is not None:
        record["solver_digest"] = cfg.digest()
    return json.dumps(record, sort_keys=True)


def hypothesis_from_json(text: str):
    record = json.loads(text)
    kind = record["kind"]
    sp = record["space"]
    if kind == "linear":
        space = LinearBallSpace(dim=sp["dim"], x_star=sp["x_star"],
                                w_star=sp["w_star"])
        return LinearHypothesis(weights=np.asarray(record["weights"]), space=space)
    if kind == "kernel":
        space = RKHSBallSpace(bandwidth=sp["bandwidth"], norm_cap=sp["norm_cap"])
        return KernelHypothesis(anchors=np.asarray(record["anchors"]),
                                coefficients=np.asarray(record["coefficients"]),
                                space=space)
    if kind == "sign_table":
        table = {_parse_key(k): v for k, v in record["table"].items()}
        return SignTableHypothesis(table=table, space=FiniteSignSpace(table.keys()))
    raise ValueError(f"unknown hypothesis kind {kind!r}")


def _parse_key(text: str):
    if text.startswith("("):
        return tuple(float(v) for v in text.strip("()").split(",") if v.strip())
    return text
