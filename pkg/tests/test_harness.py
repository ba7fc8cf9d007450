import csv
import json
import os

import numpy as np
import pytest

from ilnlab.cli import main
from ilnlab.harness import (CSV_COLUMNS, ExperimentConfig, cell_seed,
                            emit_csv, load_config, run_sweep, SweepResults)

FINITE_TOML = """
[distribution]
kind = "construction"
side = "+"

[noise]
family = "construction"

[hypothesis]
kind = "finite_sign"

[loss]
kind = "zero_one"

[sweep]
n = [50, 200]
rho = [0.2, 0.4]
seeds = [1, 2, 3]
delta = 0.05
"""

LINEAR_TOML = """
[distribution]
kind = "synthetic"
means = [[0.2, 0.0]]
variances = [0.7, 0.7]
weights = [1.0]
radius = 1.0
slope = [2.0, -1.0]

[noise]
family = "ccn"

[hypothesis]
kind = "linear_ball"
dim = 2
x_star = 1.0
w_star = 1.0

[loss]
kind = "logistic"

[solver]
iterations = 200

[sweep]
n = [100]
rho = [0.0, 0.3]
seeds = [1, 2]
delta = 0.05
mc_draws = 20000
"""


@pytest.fixture
def finite_cfg(tmp_path):
    path = tmp_path / "finite.toml"
    path.write_text(FINITE_TOML)
    return load_config(path)


@pytest.fixture
def linear_cfg_path(tmp_path):
    path = tmp_path / "linear.toml"
    path.write_text(LINEAR_TOML)
    return path


class TestConfig:
    def test_load_toml(self, finite_cfg):
        assert finite_cfg.sweep["n"] == [50, 200]
        assert finite_cfg.delta == 0.05
        assert len(finite_cfg.grid()) == 12

    def test_load_json_equivalent(self, tmp_path):
        raw = {"distribution": {"kind": "construction"},
               "noise": {"family": "construction"},
               "hypothesis": {"kind": "finite_sign"},
               "loss": {"kind": "zero_one"},
               "sweep": {"n": [10], "rho": [0.2], "seeds": [1]}}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(raw))
        cfg = load_config(path)
        assert cfg.grid() == [(10, 0.2, 1)]

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            load_config("/nonexistent/cfg.toml")

    def test_validation(self):
        base = dict(distribution={"kind": "construction"},
                    noise={"family": "construction"},
                    hypothesis={"kind": "finite_sign"},
                    loss={"kind": "zero_one"})
        with pytest.raises(ValueError):
            ExperimentConfig(**base, sweep={"n": [], "rho": [0.1],
                                            "seeds": [1]})
        with pytest.raises(ValueError):
            ExperimentConfig(**base, sweep={"n": [10], "rho": [0.1],
                                            "seeds": [1, 1]})
        with pytest.raises(ValueError):
            ExperimentConfig(**base, sweep={"n": [10], "rho": [0.1],
                                            "seeds": [1], "delta": 0.0})

    def test_cell_seed_stable_and_distinct(self):
        assert cell_seed(1, 100, 0.3) == cell_seed(1, 100, 0.3)
        seen = {cell_seed(s, n, r) for s in (1, 2) for n in (10, 20)
                for r in (0.0, 0.1)}
        assert len(seen) == 8

    def test_digest_ignores_output_section(self):
        base = dict(distribution={"kind": "construction"},
                    noise={"family": "construction"},
                    hypothesis={"kind": "finite_sign"},
                    loss={"kind": "zero_one"},
                    sweep={"n": [10], "rho": [0.1], "seeds": [1]})
        a = ExperimentConfig(**base, output={"csv": "a.csv"})
        b = ExperimentConfig(**base, output={"csv": "b.csv"})
        assert a.digest() == b.digest()


class TestRunSweep:
    def test_grid_complete_and_ordered(self, finite_cfg):
        results = run_sweep(finite_cfg)
        assert len(results) == 12
        cells = [(r["n"], r["rho"], r["seed"]) for r in results.rows]
        assert cells == finite_cfg.grid()
        assert all(not r["error"] for r in results.rows)

    def test_bounds_hold_per_row(self, finite_cfg):
        results = run_sweep(finite_cfg)
        for row in results.rows:
            assert row["gap"] <= row["bound_theorem1"] + 1e-12
            assert row["bound_theorem1"] <= row["bound_corollary1"]

    def test_summary_per_cell(self, finite_cfg):
        results = run_sweep(finite_cfg)
        assert set(results.summary) == {(n, r) for n in (50, 200)
                                        for r in (0.2, 0.4)}
        for stats in results.summary.values():
            assert stats["runs"] == 3
            assert 0.0 <= stats["frac_within_theorem1"] <= 1.0

    def test_error_rows_keep_sweep_going(self, tmp_path):
        # rho = 0 is invalid for the construction distribution: that cell
        # becomes an error row while the rest of the grid still runs
        text = FINITE_TOML.replace("rho = [0.2, 0.4]", "rho = [0.0, 0.4]")
        path = tmp_path / "err.toml"
        path.write_text(text)
        results = run_sweep(load_config(path))
        assert len(results) == 12
        errors = [r for r in results.rows if r["error"]]
        assert len(errors) == 6
        assert all(r["rho"] == 0.0 for r in errors)
        assert all("rho > 0" in r["error"] for r in errors)

    def test_zero_noise_rows_have_zero_gap(self, linear_cfg_path):
        results = run_sweep(load_config(linear_cfg_path))
        for row in results.rows:
            if row["rho"] == 0.0:
                assert row["gap"] == 0.0


class TestEmitCsv:
    def test_header_only_when_empty(self, tmp_path):
        out = tmp_path / "empty.csv"
        emit_csv(SweepResults(rows=[], summary={}), out)
        assert out.read_text().strip() == ",".join(CSV_COLUMNS)

    def test_row_count(self, finite_cfg, tmp_path):
        results = run_sweep(finite_cfg)
        out = tmp_path / "sweep.csv"
        emit_csv(results, out)
        assert len(out.read_text().splitlines()) == 13

    def test_byte_identical_across_runs(self, finite_cfg, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(run_sweep(finite_cfg), a, redact_timing=True)
        emit_csv(run_sweep(finite_cfg), b, redact_timing=True)
        assert a.read_bytes() == b.read_bytes()

    def test_byte_identical_across_worker_counts(self, finite_cfg, tmp_path,
                                                 monkeypatch):
        a, b = tmp_path / "w1.csv", tmp_path / "w2.csv"
        monkeypatch.setenv("ILNLAB_WORKERS", "1")
        emit_csv(run_sweep(finite_cfg), a, redact_timing=True)
        monkeypatch.setenv("ILNLAB_WORKERS", "2")
        emit_csv(run_sweep(finite_cfg), b, redact_timing=True)
        assert a.read_bytes() == b.read_bytes()

    def test_round_trip_parse(self, finite_cfg, tmp_path):
        results = run_sweep(finite_cfg)
        out = tmp_path / "sweep.csv"
        emit_csv(results, out)
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == len(results.rows)
        for parsed, original in zip(rows, results.rows):
            assert parsed["run_id"] == original["run_id"]
            assert int(parsed["n"]) == original["n"]
            # floats survive at the printed 9-significant-digit precision
            for col in ("gap", "bound_theorem1", "C", "g_delta"):
                assert float(parsed[col]) == pytest.approx(
                    original[col], rel=1e-8, abs=1e-12)

    def test_error_rows_have_blank_floats(self, tmp_path):
        text = FINITE_TOML.replace("rho = [0.2, 0.4]", "rho = [0.0]")
        path = tmp_path / "err.toml"
        path.write_text(text)
        out = tmp_path / "err.csv"
        emit_csv(run_sweep(load_config(path)), out)
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        for row in rows:
            assert row["error"]
            assert row["gap"] == ""


class TestCli:
    def test_bounds_subcommand(self, capsys):
        assert main(["bounds", "--kind", "theorem2_lower",
                     "--rho", "0.4"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] == 0.025

    def test_bounds_theorem1(self, capsys):
        code = main(["bounds", "--kind", "theorem1", "--rho", "0.1",
                     "--C", "2.0", "--g", "0.32239", "--delta", "0.05"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] == pytest.approx(1.24478, abs=1e-5)

    def test_sweep_missing_config(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "missing.toml"),
                     "--out", str(tmp_path / "o.csv")]) == 1

    def test_unknown_flag_rejected(self):
        assert main(["bounds", "--kind", "lemma2", "--rho", "0.1",
                     "--bogus"]) == 1

    def test_unknown_subcommand_rejected(self):
        assert main(["frobnicate"]) == 1

    def test_sweep_writes_csv(self, tmp_path):
        path = tmp_path / "cfg.toml"
        path.write_text(FINITE_TOML.replace("n = [50, 200]", "n = [50]")
                        .replace("seeds = [1, 2, 3]", "seeds = [1]"))
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--config", str(path), "--out", str(out),
                     "--redact-timing"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3

    def test_minimax_report(self, capsys, tmp_path):
        csv_out = tmp_path / "floors.csv"
        assert main(["minimax", "--rho", "0.4", "--n", "2",
                     "--csv", str(csv_out)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["kl"] == 0.0 and payload["tv"] == 0.0
        assert payload["eta_tilde"]["b"] == 0.5
        assert payload["estimator_sum_constant_plus"] == pytest.approx(0.1875)
        assert payload["lemma6_lower"] == 0.05
        assert payload["theorem2_lower"] == 0.025
        floors = csv_out.read_text().splitlines()
        assert len(floors) == 10  # header + 9 rho values

    def test_verify_suite_passes(self, capsys):
        assert main(["verify", "--suite", "lemma2", "--trials", "20",
                     "--seed", "11"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_generate_train_evaluate_roundtrip(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.toml"
        cfg.write_text(FINITE_TOML)
        data_out = tmp_path / "data.csv"
        assert main(["generate", "--config", str(cfg), "--out", str(data_out),
                     "--n", "100", "--rho", "0.4", "--seed", "2"]) == 0
        assert data_out.exists()
        hyp_out = tmp_path / "hyp.json"
        assert main(["train", "--config", str(cfg), "--out", str(hyp_out),
                     "--n", "100", "--rho", "0.4", "--seed", "2"]) == 0
        capsys.readouterr()
        assert main(["evaluate", "--config", str(cfg),
                     "--hypothesis", str(hyp_out), "--rho", "0.4",
                     "--seed", "2"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert 0.0 <= payload["clean_risk"] <= 1.0
        assert 0.0 <= payload["noisy_risk"] <= 1.0
