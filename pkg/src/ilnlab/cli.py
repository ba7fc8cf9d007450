"""Command-line interface.

Subcommands: generate, train, evaluate, bounds, sweep, minimax, verify.
Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds as bounds_mod
from . import harness, verify
from .distributions import sample_dataset
from .hypotheses import (FiniteSignSpace, erm_convex, erm_zero_one_finite,
                         hypothesis_from_json, hypothesis_to_json)
from .losses import LossSpec
from .minimax import (ENUMERATION_CAP, bayes_risk01, build_construction,
                      constant_estimator, estimator_excess_sum,
                      majority_at_b_estimator, verify_indistinguishable)
from .risk import empirical_risk, exact_risk


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ilnlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a dataset to a CSV file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)

    p = sub.add_parser("train", help="run ERM and write the hypothesis as JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--channel", choices=("clean", "noisy"), default="noisy")

    p = sub.add_parser("evaluate", help="risks of a stored hypothesis")
    p.add_argument("--config", required=True)
    p.add_argument("--hypothesis", required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc-draws", type=int, default=10 ** 6)

    p = sub.add_parser("bounds", help="print one bound report as JSON")
    p.add_argument("--kind", required=True, choices=bounds_mod.BOUND_KINDS)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--C", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--lipschitz", type=float, default=1.0)
    p.add_argument("--x-star", type=float, default=1.0)
    p.add_argument("--w-star", type=float, default=1.0)
    p.add_argument("--norm-cap", type=float, default=1.0)

    p = sub.add_parser("sweep", help="run a sweep and write the CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--redact-timing", action="store_true")

    p = sub.add_parser("minimax", help="construction report as JSON")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--csv", help="optional CSV of (rho, sum, rho/8, rho/16)")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all",
                   choices=("lemma1", "lemma2", "estimator_sum", "all"))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--draws", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_generate(args) -> int:
    cfg = harness.load_config(args.config)
    dist = cfg.build_distribution(args.rho)
    noise = cfg.build_noise(args.rho)
    data = sample_dataset(dist, noise, args.n, args.seed)
    data.save(args.out)
    print(f"wrote {len(data)} rows to {args.out}")
    return 0


def _cmd_train(args) -> int:
    cfg = harness.load_config(args.config)
    dist = cfg.build_distribution(args.rho)
    noise = cfg.build_noise(args.rho)
    data = sample_dataset(dist, noise, args.n, args.seed)
    space = cfg.build_space()
    spec = cfg.build_loss()
    if isinstance(space, FiniteSignSpace):
        h = erm_zero_one_finite(data, args.channel, space)
    else:
        h = erm_convex(data, args.channel, space, spec, cfg.build_solver())
    with open(args.out, "w") as fh:
        fh.write(hypothesis_to_json(h, cfg.build_solver()) + "\n")
    print(f"wrote hypothesis to {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    cfg = harness.load_config(args.config)
    dist = cfg.build_distribution(args.rho)
    noise = cfg.build_noise(args.rho)
    with open(args.hypothesis) as fh:
        h = hypothesis_from_json(fh.read())
    spec = cfg.build_loss()
    out = {}
    from .distributions import FiniteDistribution
    if isinstance(dist, FiniteDistribution):
        out["clean_risk"] = exact_risk(h, dist, None, spec)
        out["noisy_risk"] = exact_risk(h, dist, noise, spec)
    else:
        from .risk import mc_risk
        est = mc_risk(h, dist, None, spec, args.mc_draws, cfg.delta, args.seed)
        out["clean_risk"] = est.estimate
        out["ci_half_width"] = est.ci_half_width
        est = mc_risk(h, dist, noise, spec, args.mc_draws, cfg.delta, args.seed)
        out["noisy_risk"] = est.estimate
    data = sample_dataset(dist, noise, max(args.mc_draws // 100, 1), args.seed)
    out["empirical_clean"] = empirical_risk(h, data, spec, "clean")
    out["empirical_noisy"] = empirical_risk(h, data, spec, "noisy")
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _cmd_bounds(args) -> int:
    inputs = {"rho": args.rho}
    for key, val in (("C", args.C), ("g", args.g), ("n", args.n),
                     ("delta", args.delta), ("lipschitz", args.lipschitz),
                     ("x_star", args.x_star), ("w_star", args.w_star),
                     ("norm_cap", args.norm_cap)):
        if val is not None:
            inputs[key] = val
    report = bounds_mod.bound(args.kind, **inputs)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_sweep(args) -> int:
    cfg = harness.load_config(args.config)
    results = harness.run_sweep(cfg)
    out = args.out or cfg.output.get("csv")
    if not out:
        raise ValueError("no output path: pass --out or set [output] csv")
    harness.emit_csv(results, out, redact_timing=args.redact_timing)
    json_out = cfg.output.get("json")
    if json_out:
        harness.emit_json(results, json_out)
    errors = sum(1 for r in results.rows if r["error"])
    print(f"wrote {len(results.rows)} rows ({errors} errors) to {out}")
    return 0


def _cmd_minimax(args) -> int:
    pair = build_construction(args.rho)
    n = min(args.n, ENUMERATION_CAP)
    report = pair.to_dict()
    report.update(verify_indistinguishable(pair, n))
    report["enumeration_n"] = n
    report["bayes_risk01_minus"] = bayes_risk01(pair, "-")
    report["bayes_risk01_plus"] = bayes_risk01(pair, "+")
    report["estimator_sum_constant_plus"] = estimator_excess_sum(
        pair, constant_estimator(1), n)
    report["estimator_sum_majority_b"] = estimator_excess_sum(
        pair, majority_at_b_estimator(), n)
    report["lemma6_lower"] = args.rho / 8
    report["theorem2_lower"] = args.rho / 16
    # both Fano-method constants plus the exact identity value, recorded
    # side by side without arbitrating between them
    report["fano_constants"] = {"birge": 0.36, "proof": 1 / 3,
                               "exact_identity": report["estimator_sum_majority_b"]}
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("rho,estimator_sum,lemma6_lower,theorem2_lower\n")
            for r10 in range(1, 10):
                rho = r10 / 10
                p = build_construction(rho)
                s = estimator_excess_sum(p, constant_estimator(1), 1)
                fh.write(f"{rho:.9g},{s:.9g},{rho / 8:.9g},{rho / 16:.9g}\n")
    return 0


def _cmd_verify(args) -> int:
    suites = []
    if args.suite in ("lemma1", "all"):
        suites.append(verify.lemma1_mc_check(
            trials=args.trials, draws=args.draws, seed=args.seed))
        suites.append(verify.lemma1_transform_check(
            trials=args.trials, seed=args.seed))
    if args.suite in ("lemma2", "all"):
        suites.append(verify.clean_noisy_gap_enumeration_check(
            trials=args.trials, seed=args.seed))
    if args.suite in ("estimator_sum", "all"):
        suites.append(verify.estimator_sum_check(seed=args.seed))
    all_ok = True
    for report in suites:
        status = "PASS" if report.ok else "FAIL"
        print(f"[{status}] {report.suite}: trials={report.trials} "
              f"failures={report.failures} worst={report.worst:.3g}")
        all_ok = all_ok and report.ok
    return 0 if all_ok else 2


_COMMANDS = {
    "generate": _cmd_generate,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "bounds": _cmd_bounds,
    "sweep": _cmd_sweep,
    "minimax": _cmd_minimax,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, TypeError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
