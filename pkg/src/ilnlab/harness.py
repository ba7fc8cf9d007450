"""Configuration-driven experiment sweeps over (n, rho, seed) grids, with
deterministic cell seeding and a fixed CSV schema."""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field

import numpy as np

from .distributions import FiniteDistribution, NoiseModel, SyntheticDistribution
from .hypotheses import (FiniteSignSpace, LinearBallSpace, RKHSBallSpace,
                         SolverConfig)
from .losses import LossSpec
from .risk import RiskGapResult, risk_gap_experiment
from . import bounds

__all__ = ["ExperimentConfig", "SweepResults", "run_sweep", "emit_csv",
           "CSV_COLUMNS", "load_config"]

CSV_COLUMNS = ("run_id", "seed", "n", "rho", "dist_kind", "noise_family",
               "loss", "space", "C", "g_delta", "bound_lemma2",
               "bound_theorem1", "bound_corollary1", "clean_risk_clean_erm",
               "clean_risk_noisy_erm", "gap", "gap01", "eval_ci", "solver_tol",
               "wall_ms", "error")

_FLOAT_COLUMNS = {"rho", "C", "g_delta", "bound_lemma2", "bound_theorem1",
                  "bound_corollary1", "clean_risk_clean_erm",
                  "clean_risk_noisy_erm", "gap", "gap01", "eval_ci",
                  "solver_tol"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative sweep description; see load_config for the file schema."""

    distribution: dict
    noise: dict
    hypothesis: dict
    loss: dict
    solver: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def __post_init__(self):
        axes = self.sweep
        for axis in ("n", "rho", "seeds"):
            if not axes.get(axis):
                raise ValueError(f"sweep axis {axis!r} must be non-empty")
        seeds = list(axes["seeds"])
        if len(set(seeds)) != len(seeds):
            raise ValueError("sweep seeds must be distinct")
        delta = axes.get("delta", 0.05)
        if not (0 < delta <= 1):
            raise ValueError("delta must lie in (0, 1]")

    @property
    def delta(self) -> float:
        return self.sweep.get("delta", 0.05)

    @property
    def mc_draws(self) -> int:
        return int(self.sweep.get("mc_draws", 10 ** 6))

    def grid(self):
        return list(itertools.product(self.sweep["n"], self.sweep["rho"],
                                      self.sweep["seeds"]))

    def digest(self) -> str:
        payload = json.dumps(
            {"distribution": self.distribution, "noise": self.noise,
             "hypothesis": self.hypothesis, "loss": self.loss,
             "solver": self.solver, "sweep": self.sweep},
            sort_keys=True, default=str).encode()
        return hashlib.sha256(payload).hexdigest()[:12]

    def build_distribution(self, rho: float):
        spec = self.distribution
        kind = spec["kind"]
        if kind == "finite":
            return FiniteDistribution(spec["support"], spec["mass"],
                                      spec["posterior"])
        if kind == "synthetic":
            return SyntheticDistribution(
                means=spec["means"], variances=spec["variances"],
                weights=spec["weights"], radius=spec["radius"],
                slope=spec["slope"], intercept=spec.get("intercept", 0.0))
        if kind == "construction":
            from .minimax import build_construction
            if rho <= 0:
                raise ValueError("the construction requires rho > 0")
            return build_construction(rho).clean_distribution(
                spec.get("side", "+"))
        raise ValueError(f"unknown distribution kind {kind!r}")

    def build_noise(self, rho: float) -> NoiseModel:
        spec = self.noise
        family = spec["family"]
        if family == "rcn":
            return NoiseModel.rcn(rho / 2)
        if family == "ccn":
            share = spec.get("plus_share", 0.5)
            return NoiseModel.ccn(rho * share, rho * (1 - share))
        if family in ("pin", "iln"):
            share = 0.5 if family == "pin" else spec.get("plus_share", 0.5)
            dim = len(self.distribution.get("slope", [1.0]))
            slope = spec.get("slope", [1.0] * dim)
            return NoiseModel.iln_logistic(rho * share, rho * (1 - share),
                                           slope, spec.get("intercept", 0.0))
        if family == "construction":
            from .minimax import build_construction
            return build_construction(rho).noise_model(
                self.distribution.get("side", "+"))
        raise ValueError(f"unknown noise family {family!r}")

    def build_space(self):
        spec = self.hypothesis
        kind = spec["kind"]
        if kind == "linear_ball":
            dim = spec.get("dim") or len(self.distribution["slope"])
            return LinearBallSpace(dim=dim, x_star=spec["x_star"],
                                   w_star=spec["w_star"])
        if kind == "rkhs_ball":
            return RKHSBallSpace(bandwidth=spec["bandwidth"],
                                 norm_cap=spec["norm_cap"])
        if kind == "finite_sign":
            if self.distribution["kind"] == "construction":
                return FiniteSignSpace(("a", "b", "c"))
            return FiniteSignSpace(self.distribution["support"])
        raise ValueError(f"unknown hypothesis kind {kind!r}")

    def build_loss(self) -> LossSpec:
        return LossSpec(self.loss["kind"],
                        self.loss.get("lipschitz"))

    def build_solver(self) -> SolverConfig:
        return SolverConfig(iterations=self.solver.get("iterations", 2000),
                            step_scale=self.solver.get("step_scale"))


def load_config(path) -> ExperimentConfig:
    """Read a TOML (or JSON) config file with sections [distribution],
    [noise], [hypothesis], [loss], [solver], [sweep], [output]."""
    path = str(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, "rb") as fh:
        if path.endswith(".json"):
            raw = json.load(fh)
        else:
            raw = tomllib.load(fh)
    return ExperimentConfig(
        distribution=raw["distribution"], noise=raw["noise"],
        hypothesis=raw["hypothesis"], loss=raw["loss"],
        solver=raw.get("solver", {}), sweep=raw.get("sweep", {}),
        output=raw.get("output", {}))


def cell_seed(seed: int, n: int, rho: float) -> int:
    """Stable per-cell RNG seed, independent of grid enumeration order."""
    payload = f"{int(seed)}|{int(n)}|{float(rho)!r}".encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big") >> 1


@dataclass
class SweepResults:
    rows: list
    summary: dict

    def __len__(self) -> int:
        return len(self.rows)


def _run_cell(cfg: ExperimentConfig, index: int, n: int, rho: float,
              seed: int) -> dict:
    run_id = f"{cfg.digest()}-{index:04d}"
    row = {"run_id": run_id, "seed": seed, "n": n, "rho": rho,
           "dist_kind": cfg.distribution["kind"],
           "noise_family": cfg.noise["family"], "loss": cfg.loss["kind"],
           "space": cfg.hypothesis["kind"], "error": ""}
    start = time.perf_counter()
    try:
        dist = cfg.build_distribution(rho)
        noise = cfg.build_noise(rho)
        space = cfg.build_space()
        spec = cfg.build_loss()
        result = risk_gap_experiment(dist, noise, space, spec,
                                     cfg.build_solver(), n, cfg.delta,
                                     cell_seed(seed, n, rho),
                                     mc_draws=cfg.mc_draws)
        row.update({
            "C": result.C, "g_delta": result.g_delta,
            "bound_lemma2": bounds.bound("lemma2", C=result.C,
                                         rho=result.rho).value,
            "bound_theorem1": result.bound_theorem1,
            "bound_corollary1": bounds.bound(
                "corollary1", C=result.C, rho=result.rho,
                g=result.g_delta, delta=result.delta).value,
            "clean_risk_clean_erm": result.clean_risk_of_clean_erm,
            "clean_risk_noisy_erm": result.clean_risk_of_noisy_erm,
            "gap": result.gap, "gap01": result.gap01,
            "eval_ci": result.eval_ci, "solver_tol": result.solver_tol,
        })
    except Exception as exc:  # error rows keep the sweep going
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["wall_ms"] = int((time.perf_counter() - start) * 1000)
    return row


def run_sweep(cfg: ExperimentConfig) -> SweepResults:
    """Execute the full (n, rho, seed) grid; failed cells become error rows.

    The worker count comes from ILNLAB_WORKERS (default 1); rows are emitted
    in grid order regardless of execution order.
    """
    grid = cfg.grid()
    workers = int(os.environ.get("ILNLAB_WORKERS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, cfg, i, n, rho, seed)
                       for i, (n, rho, seed) in enumerate(grid)]
            rows = [f.result() for f in futures]
    else:
        rows = [_run_cell(cfg, i, n, rho, seed)
                for i, (n, rho, seed) in enumerate(grid)]

    summary = {}
    for n, rho in itertools.product(cfg.sweep["n"], cfg.sweep["rho"]):
        cell_rows = [r for r in rows
                     if r["n"] == n and r["rho"] == rho and not r["error"]]
        gaps = [r["gap"] for r in cell_rows]
        within = [r["gap"] <= r["bound_theorem1"] for r in cell_rows]
        summary[(n, rho)] = {
            "median_gap": float(np.median(gaps)) if gaps else float("nan"),
            "frac_within_theorem1": (sum(within) / len(within)) if within
            else float("nan"),
            "runs": len(cell_rows),
        }
    return SweepResults(rows=rows, summary=summary)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def emit_csv(results: SweepResults, path, redact_timing: bool = False) -> None:
    """Fixed-schema CSV, floats at 9 significant digits.

    ``redact_timing`` zeroes the wall_ms column so that repeated runs of the
    same config produce byte-identical files.
    """
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in results.rows:
                out = []
                for col in CSV_COLUMNS:
                    if row["error"] and col in _FLOAT_COLUMNS:
                        out.append("")
                    elif col == "wall_ms":
                        out.append("0" if redact_timing else str(row["wall_ms"]))
                    else:
                        out.append(_fmt(row.get(col, "")))
                writer.writerow(out)
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path!r}: {exc}") from exc


def emit_json(results: SweepResults, path) -> None:
    payload = {
        "rows": results.rows,
        "summary": [{"n": n, "rho": rho, **stats}
                    for (n, rho), stats in results.summary.items()],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
