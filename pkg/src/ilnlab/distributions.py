"""Clean distributions, label-noise models, and seeded sampling of (x, y, y~) triples.

A clean distribution is either a finite distribution (explicit support, masses
and posterior values) or a synthetic Gaussian-mixture family with a logistic
posterior over a ball of radius ``radius``. A noise model is a pair of
flip-probability functions (rho_plus, rho_minus) together with a declared
uniform bound on their sum.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "FiniteDistribution",
    "SyntheticDistribution",
    "NoiseModel",
    "Dataset",
    "noisy_posterior",
    "sample_dataset",
    "check_noise_bound",
    "check_margin",
    "check_anchor",
    "NoiseBoundReport",
    "MarginReport",
    "AnchorReport",
    "point_key",
]

GENERATOR_VERSION = "1"

_MASS_TOL = 1e-12


def point_key(x):
    """Hashable key for a support point (string label or real vector)."""
    if isinstance(x, str):
        return x
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return (float(arr),)
    return tuple(float(v) for v in arr)


def _stable_digest(obj) -> str:
    payload = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class FiniteDistribution:
    """Finite-support feature law with per-point posterior eta(x) = P(Y=1|X=x)."""

    support: tuple
    mass: np.ndarray
    posterior: np.ndarray

    def __init__(self, support, mass, posterior):
        support = tuple(
            p if isinstance(p, str) else tuple(float(v) for v in np.atleast_1d(p))
            for p in support
        )
        mass = np.asarray(mass, dtype=float)
        posterior = np.asarray(posterior, dtype=float)
        if len(support) == 0:
            raise ValueError("empty support")
        if mass.shape != (len(support),) or posterior.shape != (len(support),):
            raise ValueError("support, mass and posterior must have equal length")
        if np.any(mass <= 0):
            raise ValueError("all masses must be strictly positive")
        if abs(mass.sum() - 1.0) > _MASS_TOL:
            raise ValueError(f"masses must sum to 1 (got {mass.sum()!r})")
        if np.any(posterior < 0) or np.any(posterior > 1):
            raise ValueError("posterior values must lie in [0, 1]")
        mass.setflags(write=False)
        posterior.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "posterior", posterior)

    @property
    def is_vector_valued(self) -> bool:
        return not isinstance(self.support[0], str)

    @property
    def dim(self) -> int | None:
        if not self.is_vector_valued:
            return None
        return len(self.support[0])

    def index_of(self, x) -> int:
        key = point_key(x)
        for i, p in enumerate(self.support):
            if point_key(p) == key:
                return i
        raise KeyError(f"point {x!r} is not in the support")

    def eta(self, x) -> float:
        return float(self.posterior[self.index_of(x)])

    def with_posterior(self, posterior) -> "FiniteDistribution":
        return FiniteDistribution(self.support, self.mass, posterior)

    def describe(self) -> dict:
        return {
            "kind": "finite",
            "support": [list(p) if not isinstance(p, str) else p for p in self.support],
            "mass": self.mass.tolist(),
            "posterior": self.posterior.tolist(),
        }


@dataclass(frozen=True)
class SyntheticDistribution:
    """Gaussian mixture over R^d clipped to the ball of radius ``radius``,
    with logistic posterior eta(x) = 1 / (1 + exp(-(a.x + b)))."""

    means: np.ndarray
    variances: np.ndarray
    weights: np.ndarray
    radius: float
    slope: np.ndarray
    intercept: float

    def __init__(self, means, variances, weights, radius, slope, intercept=0.0):
        means = np.atleast_2d(np.asarray(means, dtype=float))
        variances = np.asarray(variances, dtype=float)
        weights = np.asarray(weights, dtype=float)
        slope = np.atleast_1d(np.asarray(slope, dtype=float))
        if variances.ndim == 0:
            variances = np.full(means.shape[1], float(variances))
        if np.any(variances <= 0):
            raise ValueError("variances must be positive")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > _MASS_TOL:
            raise ValueError("mixing weights must be non-negative and sum to 1")
        if weights.shape != (means.shape[0],):
            raise ValueError("one weight per mixture component required")
        if slope.shape != (means.shape[1],):
            raise ValueError("slope dimension must match the feature dimension")
        if radius <= 0:
            raise ValueError("radius must be positive")
        for a in (means, variances, weights, slope):
            a.setflags(write=False)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "variances", variances)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "radius", float(radius))
        object.__setattr__(self, "slope", slope)
        object.__setattr__(self, "intercept", float(intercept))

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    def sample_x(self, rng: np.random.Generator, n: int) -> np.ndarray:
        comp = rng.choice(len(self.weights), size=n, p=self.weights)
        x = self.means[comp] + rng.standard_normal((n, self.dim)) * np.sqrt(self.variances)
        # radial clipping keeps every draw inside the ball
        norms = np.linalg.norm(x, axis=1)
        over = norms > self.radius
        if np.any(over):
            x[over] *= (self.radius / norms[over])[:, None]
        return x

    def eta(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        z = x @ self.slope + self.intercept
        return 1.0 / (1.0 + np.exp(-z))

    def describe(self) -> dict:
        return {
            "kind": "synthetic",
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "weights": self.weights.tolist(),
            "radius": self.radius,
            "slope": self.slope.tolist(),
            "intercept": self.intercept,
        }


def noisy_posterior(eta, rho_plus, rho_minus):
    """Noisy regression function: eta~ = (1 - rho+) eta + rho- (1 - eta).

    Accepts scalars, numpy arrays, or exact ``fractions.Fraction`` inputs
    (the arithmetic is carried out on the inputs as given).
    """
    e = np.asarray(eta, dtype=float)
    rp = np.asarray(rho_plus, dtype=float)
    rm = np.asarray(rho_minus, dtype=float)
    if np.any(e < 0) or np.any(e > 1):
        raise ValueError("eta must lie in [0, 1]")
    if np.any(rp < 0) or np.any(rp >= 1) or np.any(rm < 0) or np.any(rm >= 1):
        raise ValueError("flip probabilities must lie in [0, 1)")
    if np.any(rp + rm >= 1):
        raise ValueError("rho_plus + rho_minus must be < 1")
    return (1 - rho_plus) * eta + rho_minus * (1 - eta)


@dataclass(frozen=True)
class NoiseModel:
    """Flip-probability pair (rho_plus, rho_minus) with a declared sum bound.

    ``rho_plus(x)`` is the probability of flipping a true +1 label at x,
    ``rho_minus(x)`` of flipping a true -1 label. The declared ``rho_bound``
    is the uniform bound on rho_plus(x) + rho_minus(x); every evaluation is
    checked against it.
    """

    family: str
    rho_plus: Callable
    rho_minus: Callable
    rho_bound: float
    params: dict = field(default_factory=dict)
    vectorized: bool = False

    def __post_init__(self):
        if not (0 <= self.rho_bound < 1):
            raise ValueError("rho_bound must lie in [0, 1)")

    @classmethod
    def rcn(cls, rho: float) -> "NoiseModel":
        """Random classification noise: both flip rates constant ``rho``."""
        if not (0 <= rho < 0.5):
            raise ValueError("rcn rate must lie in [0, 0.5) so the sum bound is < 1")
        return cls("rcn", lambda x: rho, lambda x: rho, 2 * rho,
                   params={"rho": rho}, vectorized=True)

    @classmethod
    def ccn(cls, rho_plus: float, rho_minus: float) -> "NoiseModel":
        if rho_plus + rho_minus >= 1:
            raise ValueError("rho_plus + rho_minus must be < 1")
        return cls("ccn", lambda x: rho_plus, lambda x: rho_minus,
                   rho_plus + rho_minus,
                   params={"rho_plus": rho_plus, "rho_minus": rho_minus},
                   vectorized=True)

    @classmethod
    def pin(cls, fn: Callable, rho_bound: float, params=None,
            vectorized: bool = False) -> "NoiseModel":
        """Purely instance-dependent noise: rho_plus == rho_minus == fn."""
        return cls("pin", fn, fn, rho_bound, params=dict(params or {}),
                   vectorized=vectorized)

    @classmethod
    def iln(cls, rho_plus: Callable, rho_minus: Callable, rho_bound: float,
            params=None, vectorized: bool = False) -> "NoiseModel":
        return cls("iln", rho_plus, rho_minus, rho_bound,
                   params=dict(params or {}), vectorized=vectorized)

    @classmethod
    def iln_logistic(cls, scale_plus: float, scale_minus: float, slope,
                     intercept: float = 0.0) -> "NoiseModel":
        """ILN family rho_y(x) = scale_y * logistic(slope.x + intercept).

        The logistic factor is < 1, so scale_plus + scale_minus bounds the sum.
        """
        slope = np.atleast_1d(np.asarray(slope, dtype=float))
        if scale_plus < 0 or scale_minus < 0 or scale_plus + scale_minus >= 1:
            raise ValueError("scales must be non-negative with sum < 1")

        def _logistic(x):
            z = np.atleast_2d(np.asarray(x, dtype=float)) @ slope + intercept
            return 1.0 / (1.0 + np.exp(-z))

        return cls(
            "iln",
            lambda x: scale_plus * _logistic(x),
            lambda x: scale_minus * _logistic(x),
            scale_plus + scale_minus,
            params={"scale_plus": scale_plus, "scale_minus": scale_minus,
                    "slope": slope.tolist(), "intercept": intercept,
                    "form": "logistic"},
            vectorized=True,
        )

    @classmethod
    def table(cls, rates: dict, rho_bound: float, family: str = "iln") -> "NoiseModel":
        """Per-point noise table: key -> (rho_plus, rho_minus)."""
        rates = {point_key(k): (float(p), float(m)) for k, (p, m) in rates.items()}
        return cls(
            family,
            lambda x: rates[point_key(x)][0],
            lambda x: rates[point_key(x)][1],
            rho_bound,
            params={"table": {str(k): v for k, v in sorted(rates.items())}},
        )

    def rates(self, points) -> tuple[np.ndarray, np.ndarray]:
        """Evaluate (rho_plus, rho_minus) over a batch of points."""
        if self.vectorized:
            rp = np.broadcast_to(np.asarray(self.rho_plus(points), dtype=float),
                                 (len(points),)).copy()
            rm = np.broadcast_to(np.asarray(self.rho_minus(points), dtype=float),
                                 (len(points),)).copy()
        else:
            rp = np.array([self.rho_plus(p) for p in points], dtype=float)
            rm = np.array([self.rho_minus(p) for p in points], dtype=float)
        return rp, rm

    def check_sums(self, rp: np.ndarray, rm: np.ndarray) -> None:
        s = rp + rm
        if np.any(rp < 0) or np.any(rm < 0):
            raise ValueError("negative flip probability encountered")
        if np.any(s > self.rho_bound + 1e-12) or np.any(s >= 1):
            raise ValueError(
                "noise sums exceed the declared bound: "
                f"max {s.max():.6g} vs rho_bound {self.rho_bound:.6g}"
            )

    def describe(self) -> dict:
        return {"family": self.family, "rho_bound": self.rho_bound,
                "params": self.params}


@dataclass(frozen=True)
class Dataset:
    """Seeded i.i.d. sample of (x, y, y~) triples with provenance."""

    x: np.ndarray
    y: np.ndarray
    y_tilde: np.ndarray
    seed: int
    config_digest: str

    def __post_init__(self):
        if len(self.y) != len(self.x) or len(self.y_tilde) != len(self.x):
            raise ValueError("column length mismatch")
        for col in (self.y, self.y_tilde):
            if not np.all(np.isin(col, (-1, 1))):
                raise ValueError("labels must be exactly +/-1")

    def __len__(self) -> int:
        return len(self.y)

    def labels(self, channel: str) -> np.ndarray:
        if channel == "clean":
            return self.y
        if channel == "noisy":
            return self.y_tilde
        raise ValueError(f"unknown label channel {channel!r}")

    def rows(self):
        for i in range(len(self)):
            yield self.x[i], int(self.y[i]), int(self.y_tilde[i])

    def save(self, path) -> None:
        """Write one row per line (x_1,...,x_d,y,y_tilde) plus a JSON sidecar."""
        path = str(path)
        if self.x.ndim == 2:
            cols = [f"x_{j + 1}" for j in range(self.x.shape[1])]
        else:
            cols = ["x"]
        with open(path, "w") as fh:
            fh.write(",".join(cols + ["y", "y_tilde"]) + "\n")
            for x, y, yt in self.rows():
                if isinstance(x, str):
                    feat = [x]
                else:
                    feat = [repr(float(v)) for v in np.atleast_1d(x)]
                fh.write(",".join(feat + [str(y), str(yt)]) + "\n")
        meta = {"seed": int(self.seed), "config_digest": self.config_digest,
                "generator_version": GENERATOR_VERSION, "n": len(self)}
        with open(path + ".meta.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _clean_stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[int(seed), 0]))


def _noise_stream(seed: int) -> np.random.Generator:
    # independent of the clean stream so that clean labels are identical
    # across noise models at the same seed (paired comparisons)
    return np.random.Generator(np.random.Philox(key=[int(seed), 1]))


def _eval_stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[int(seed), 2]))


def sample_dataset(dist, noise: NoiseModel, n: int, seed: int) -> Dataset:
    """Draw n i.i.d. triples: x ~ P_X, y = +1 w.p. eta(x), y~ flipped w.p. rho_y(x)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _clean_stream(seed)
    if isinstance(dist, FiniteDistribution):
        idx = rng.choice(len(dist.support), size=n, p=dist.mass)
        eta = dist.posterior[idx]
        rp_sup, rm_sup = noise.rates(list(dist.support))
        noise.check_sums(rp_sup, rm_sup)
        rp, rm = rp_sup[idx], rm_sup[idx]
        if dist.is_vector_valued:
            x = np.asarray(dist.support, dtype=float)[idx]
        else:
            x = np.array(dist.support, dtype=object)[idx]
    elif isinstance(dist, SyntheticDistribution):
        x = dist.sample_x(rng, n)
        eta = dist.eta(x)
        rp, rm = noise.rates(x)
        noise.check_sums(rp, rm)
    else:
        raise TypeError(f"unsupported distribution type {type(dist).__name__}")

    y = np.where(rng.random(n) < eta, 1, -1).astype(np.int8)
    flip_prob = np.where(y == 1, rp, rm)
    flips = _noise_stream(seed).random(n) < flip_prob
    y_tilde = np.where(flips, -y, y).astype(np.int8)
    digest = _stable_digest({"dist": dist.describe(), "noise": noise.describe(),
                             "n": n, "seed": int(seed)})
    return Dataset(x=x, y=y, y_tilde=y_tilde, seed=int(seed), config_digest=digest)


@dataclass(frozen=True)
class NoiseBoundReport:
    max_sum: float
    mean_sum: float
    ok: bool


def check_noise_bound(noise: NoiseModel, probe) -> NoiseBoundReport:
    """Evaluate rho_plus + rho_minus over a probe set.

    ``probe`` is either a FiniteDistribution (mean weighted by its masses) or
    an array/list of points (unweighted empirical mean).
    """
    if isinstance(probe, FiniteDistribution):
        points = list(probe.support)
        weights = probe.mass
    else:
        points = np.atleast_2d(np.asarray(probe, dtype=float)) \
            if not isinstance(probe, (list, tuple)) else list(probe)
        if len(points) == 0:
            raise ValueError("probe must be non-empty")
        weights = np.full(len(points), 1.0 / len(points))
    rp, rm = noise.rates(points)
    sums = rp + rm
    return NoiseBoundReport(
        max_sum=float(sums.max()),
        mean_sum=float(np.dot(weights, sums)),
        ok=bool(sums.max() <= noise.rho_bound + 1e-12),
    )


@dataclass(frozen=True)
class MarginReport:
    ok: bool
    worst_xi: float


def check_margin(dist: FiniteDistribution, alpha: float, c_alpha: float) -> MarginReport:
    """Check P(0 < |eta - 1/2| < xi) <= C_alpha * xi^alpha for all xi in (0, 1).

    The left side is a step function of xi with jumps at the distinct values
    of |eta - 1/2|; both sides are monotone between jumps, so checking the
    right-limit at each jump point suffices.
    """
    if alpha < 0 or c_alpha < 1:
        raise ValueError("require alpha >= 0 and c_alpha >= 1")
    m = np.abs(dist.posterior - 0.5)
    # deterministic-label mass (|eta - 1/2| = 1/2) never counts against the
    # margin: the condition constrains mass near the boundary, not anchors
    steps = sorted(set(float(v) for v in m if 0 < v < 0.5))
    worst_xi = float("nan")
    worst_slack = float("inf")
    ok = True
    for v in steps:
        lhs = float(dist.mass[(m > 0) & (m <= v)].sum())
        rhs = c_alpha * v ** alpha
        slack = rhs - lhs
        if slack < worst_slack:
            worst_slack, worst_xi = slack, v
        if slack < -1e-12:
            ok = False
    return MarginReport(ok=ok, worst_xi=worst_xi)


@dataclass(frozen=True)
class AnchorReport:
    has_pos_anchor: bool
    has_neg_anchor: bool


def check_anchor(dist: FiniteDistribution, tol: float = 1e-9) -> AnchorReport:
    """Anchor points: positive-mass x with eta(x) >= 1 - tol (resp. <= tol)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return AnchorReport(
        has_pos_anchor=bool(np.any(dist.posterior >= 1 - tol)),
        has_neg_anchor=bool(np.any(dist.posterior <= tol)),
    )
