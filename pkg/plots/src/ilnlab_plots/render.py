"""Render figures from sweep CSV and construction JSON files.

Usage: ilnlab-plot INPUT KIND OUTPUT

KIND is one of gap_vs_n, gap_vs_rho, construction, bounds_overlay.
Exit codes: 0 success, 2 schema mismatch (the offending column is named).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# deterministic element ids so that re-rendering reproduces the same bytes
matplotlib.rcParams["svg.hashsalt"] = "ilnlab-plots"

FIGURE_KINDS = ("gap_vs_n", "gap_vs_rho", "construction", "bounds_overlay")

# fixed sweep CSV schema; column order is part of the contract
SWEEP_COLUMNS = ("run_id", "seed", "n", "rho", "dist_kind", "noise_family",
                 "loss", "space", "C", "g_delta", "bound_lemma2",
                 "bound_theorem1", "bound_corollary1", "clean_risk_clean_erm",
                 "clean_risk_noisy_erm", "gap", "gap01", "eval_ci",
                 "solver_tol", "wall_ms", "error")

_FLOAT_COLUMNS = ("rho", "C", "g_delta", "bound_lemma2", "bound_theorem1",
                  "bound_corollary1", "clean_risk_clean_erm",
                  "clean_risk_noisy_erm", "gap", "gap01", "eval_ci",
                  "solver_tol")

_CONSTRUCTION_KEYS = ("rho", "domain", "eta_minus", "eta_plus", "eta_tilde")


class SchemaError(ValueError):
    """Input file does not match the expected schema; .column names the
    first offending column or key."""

    def __init__(self, column: str, message: str):
        super().__init__(message)
        self.column = column


def load_sweep_csv(path: str) -> list[dict]:
    """Parse a sweep CSV, skipping error rows; numeric columns become floats."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        for col in SWEEP_COLUMNS:
            if col not in header:
                raise SchemaError(col, f"sweep CSV is missing column {col!r}")
        rows = []
        for raw in reader:
            if raw["error"]:
                continue
            row = dict(raw)
            row["n"] = int(raw["n"])
            row["seed"] = int(raw["seed"])
            for col in _FLOAT_COLUMNS:
                try:
                    row[col] = float(raw[col])
                except ValueError:
                    raise SchemaError(
                        col, f"column {col!r} holds non-numeric "
                             f"value {raw[col]!r}") from None
            rows.append(row)
    return rows


def load_construction(path: str) -> dict:
    with open(path) as fh:
        report = json.load(fh)
    for key in _CONSTRUCTION_KEYS:
        if key not in report:
            raise SchemaError(key, f"construction JSON is missing key {key!r}")
    return report


def construction_bar_data(report: dict) -> dict:
    """Bar heights for the three posteriors over the report's domain."""
    domain = list(report["domain"])
    return {
        "domain": domain,
        "eta_minus": [report["eta_minus"][x] for x in domain],
        "eta_plus": [report["eta_plus"][x] for x in domain],
        "eta_tilde": [report["eta_tilde"][x] for x in domain],
    }


def floor_lines(rows: list[dict]) -> dict:
    """Irreducible-error floor rho / 16 for each noise level in the sweep."""
    return {rho: rho / 16 for rho in sorted({r["rho"] for r in rows})
            if rho > 0}


def _group_by_rho(rows):
    groups = defaultdict(list)
    for row in rows:
        groups[row["rho"]].append(row)
    return dict(sorted(groups.items()))


def _median_series(rows, axis_key, value_key):
    buckets = defaultdict(list)
    for row in rows:
        buckets[row[axis_key]].append(row[value_key])
    xs = sorted(buckets)
    return xs, [float(np.median(buckets[x])) for x in xs]


def _render_gap_vs_n(rows, ax):
    for rho, group in _group_by_rho(rows).items():
        xs, gaps = _median_series(group, "n", "gap")
        ax.plot(xs, gaps, marker="o", label=f"gap, rho={rho:g}")
        _, bounds = _median_series(group, "n", "bound_theorem1")
        ax.plot(xs, bounds, linestyle="--", label=f"bound, rho={rho:g}")
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("clean risk gap")
    ax.legend(fontsize=7)


def _render_gap_vs_rho(rows, ax):
    for n in sorted({r["n"] for r in rows}):
        group = [r for r in rows if r["n"] == n]
        xs, gaps = _median_series(group, "rho", "gap")
        ax.plot(xs, gaps, marker="o", label=f"gap, n={n}")
        _, bounds = _median_series(group, "rho", "bound_theorem1")
        ax.plot(xs, bounds, linestyle="--", label=f"bound, n={n}")
    ax.set_xlabel("rho")
    ax.set_ylabel("clean risk gap")
    ax.legend(fontsize=7)


def _render_construction(report, ax):
    data = construction_bar_data(report)
    idx = np.arange(len(data["domain"]))
    width = 0.25
    ax.bar(idx - width, data["eta_minus"], width, label="eta-")
    ax.bar(idx, data["eta_plus"], width, label="eta+")
    ax.bar(idx + width, data["eta_tilde"], width, label="noisy eta")
    ax.set_xticks(idx)
    ax.set_xticklabels(data["domain"])
    ax.set_ylabel("P(y = +1 | x)")
    ax.set_title(f"construction at rho = {report['rho']:g}")
    ax.legend()


def _render_bounds_overlay(rows, ax):
    _render_gap_vs_n(rows, ax)
    for rho, floor in floor_lines(rows).items():
        ax.axhline(floor, color="grey", linewidth=0.8, linestyle=":",
                   label=f"floor rho/16 = {floor:g} (rho={rho:g})")
    ax.legend(fontsize=6)


def render(input_path: str, kind: str, output_path: str) -> None:
    """Render one figure; raises SchemaError on malformed input."""
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; "
                         f"expected one of {FIGURE_KINDS}")
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        if kind == "construction":
            _render_construction(load_construction(input_path), ax)
        else:
            rows = load_sweep_csv(input_path)
            if not rows:
                raise SchemaError("error", "sweep CSV holds no usable rows")
            if kind == "gap_vs_n":
                _render_gap_vs_n(rows, ax)
            elif kind == "gap_vs_rho":
                _render_gap_vs_rho(rows, ax)
            else:
                _render_bounds_overlay(rows, ax)
        fig.tight_layout()
        # a cleared Date keeps repeated renders byte-comparable
        fig.savefig(output_path, metadata=_no_timestamp(output_path))
    finally:
        plt.close(fig)


def _no_timestamp(output_path: str):
    if output_path.endswith(".svg"):
        return {"Date": None}
    if output_path.endswith(".png"):
        return {"Software": None}
    return None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ilnlab-plot",
        description="Render a figure from ilnlab output files.")
    parser.add_argument("input", help="sweep CSV or construction JSON path")
    parser.add_argument("kind", choices=FIGURE_KINDS)
    parser.add_argument("output", help="image path (.png or .svg)")
    args = parser.parse_args(argv)
    try:
        render(args.input, args.kind, args.output)
    except SchemaError as exc:
        print(f"schema mismatch in column {exc.column!r}: {exc}",
              file=sys.stderr)
        return 2
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
