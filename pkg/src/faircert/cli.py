"""Command-line interface: audit, screen, gen, selftest.

Exit codes: 0 all checks passed, 1 usage/data/config errors, 2 at least one
bound check or screening failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .audit import run_audit
from .certify import screen_auditor
from .errors import AuditError, ConfigError
from .io import (
    align_pairs,
    load_audit_config,
    parse_pair_distances,
    read_evaluation_table,
    write_evaluations,
    write_pair_distances,
)
from .metrics import evaluator_profile, pair_profile
from .records import records_from_pairs
from .selftest import run_selftest
from .synth import ScenarioSpec, generate_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faircert",
        description="Audit decision systems against a benchmark evaluator and "
        "screen candidate auditors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="audit a system against a benchmark")
    p_audit.add_argument("--system", required=True, help="system evaluation CSV")
    p_audit.add_argument("--benchmark", required=True, help="benchmark evaluation CSV")
    p_audit.add_argument("--config", required=True, help="audit config JSON")
    p_audit.add_argument("--out", help="write the JSON report here instead of stdout")
    p_audit.add_argument(
        "--summary", choices=("text", "md"), default="text", help="summary format"
    )
    p_audit.add_argument(
        "--drop-unmatched",
        action="store_true",
        help="drop ids present on only one side instead of failing",
    )
    p_audit.set_defaults(func=cmd_audit)

    p_screen = sub.add_parser("screen", help="screen a candidate auditor")
    p_screen.add_argument("--candidate", required=True, help="candidate evaluation CSV")
    p_screen.add_argument("--benchmark", required=True, help="benchmark evaluation CSV")
    p_screen.add_argument("--config", required=True, help="config JSON with a screening section")
    p_screen.add_argument("--out", help="write the JSON report here instead of stdout")
    p_screen.add_argument(
        "--drop-unmatched",
        action="store_true",
        help="drop ids present on only one side instead of failing",
    )
    p_screen.set_defaults(func=cmd_screen)

    p_gen = sub.add_parser("gen", help="generate a synthetic scenario")
    p_gen.add_argument("--spec", required=True, help="scenario spec JSON")
    p_gen.add_argument("--out-dir", required=True, help="directory for the generated files")
    p_gen.set_defaults(func=cmd_gen)

    p_selftest = sub.add_parser("selftest", help="regenerate and recheck random scenarios")
    p_selftest.add_argument("--trials", type=int, default=100)
    p_selftest.add_argument("--seed", type=int, default=0)
    p_selftest.set_defaults(func=cmd_selftest)

    return parser


def _load_lookup(config, table_records):
    """Pair-distance table named by the config, validated against known ids."""
    path = config.paths.get("pair-distances")
    if config.metric.input_metric != "supplied-matrix":
        return None
    if path is None:
        raise ConfigError(
            "input metric 'supplied-matrix' needs paths.pair-distances in the config"
        )
    return parse_pair_distances(path, ids=[r.id for r in table_records])


def _emit_report(report: dict, out_path, summary_lines) -> None:
    for line in summary_lines:
        print(line)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        print(f"report written to {out_path}")
    else:
        print(text, end="")


def _fmt(v, digits=6):
    if v is None:
        return "n/a"
    return f"{v:.{digits}g}"


def _audit_summary(outcome, fmt: str) -> list[str]:
    report = outcome.report()
    rows = [
        ("pairs audited", str(report["n_pairs"])),
        ("epsilon_hat", _fmt(report["epsilon_hat"])),
        (
            f"if_slack_hat (kappa={_fmt(report['kappa'])})",
            "vacuous" if report["if_vacuous"] else _fmt(report["if_slack_hat"]),
        ),
        ("sp_gap benchmark/system", f"{_fmt(report['sp_gap_f'])} / {_fmt(report['sp_gap_g'])}"),
        (
            "m_hat",
            _fmt(report["m_hat"]) + ("" if report["m_defined"] else " (undefined: identical)"),
        ),
    ]
    checks = [
        (
            v["check"],
            "PASS" if v["passed"] else "FAIL",
            f"observed {_fmt(v['observed_value'])} vs bound {_fmt(v['bound_value'])}"
            + (f" [{v['reason']}]" if v["reason"] else ""),
        )
        for v in report["verdicts"]
    ]
    if fmt == "md":
        lines = ["| quantity | value |", "| --- | --- |"]
        lines += [f"| {k} | {v} |" for k, v in rows]
        lines += ["", "| check | result | detail |", "| --- | --- | --- |"]
        lines += [f"| {c} | {r} | {d} |" for c, r, d in checks]
        lines += [f"| note | | {n} |" for n in report["notes"]]
        return lines
    lines = [f"{k}: {v}" for k, v in rows]
    lines += [f"{c}: {r} ({d})" for c, r, d in checks]
    lines += [f"note: {n}" for n in report["notes"]]
    return lines


def cmd_audit(args) -> int:
    config = load_audit_config(args.config)
    system = read_evaluation_table(args.system)
    benchmark = read_evaluation_table(args.benchmark)
    lookup = _load_lookup(config, benchmark.records)
    outcome = run_audit(
        system.records,
        benchmark.records,
        config.metric,
        lookup=lookup,
        score_threshold=config.score_threshold,
        on_unmatched="drop" if args.drop_unmatched else "error",
    )
    _emit_report(outcome.report(), args.out, _audit_summary(outcome, args.summary))
    return EXIT_OK if outcome.passed else EXIT_CHECK_FAILED


def cmd_screen(args) -> int:
    config = load_audit_config(args.config)
    if config.screening is None:
        raise ConfigError(f"{args.config}: screening needs a 'screening' section")
    screening = config.screening
    # the screening kappa governs here; the metric block keeps its other settings
    metric = replace(config.metric, kappa=screening.kappa)
    candidate = read_evaluation_table(args.candidate)
    benchmark = read_evaluation_table(args.benchmark)
    lookup = _load_lookup(replace(config, metric=metric), benchmark.records)
    pairs = align_pairs(
        candidate.records,
        benchmark.records,
        on_unmatched="drop" if args.drop_unmatched else "error",
    )
    need_cor2 = "cor2" in screening.checks
    candidate_profile = pair_profile(
        pairs,
        metric,
        score_threshold=config.score_threshold,
        with_lipschitz=need_cor2 and screening.m_mode == "estimated",
    )
    benchmark_profile = None
    if screening.delta_benchmark_if is None or screening.delta_benchmark_sp is None:
        benchmark_profile = evaluator_profile(
            records_from_pairs(pairs, "f"),
            metric,
            lookup=lookup,
            score_threshold=config.score_threshold,
        )
    v1, v2 = screen_auditor(candidate_profile, benchmark_profile, screening)
    verdicts = [v for v in (v1, v2) if v is not None]
    report = {
        "epsilon_hat": float(candidate_profile.epsilon_hat),
        "kappa": float(screening.kappa),
        "delta_prime": float(screening.delta_prime),
        "verdicts": [v.as_dict() for v in verdicts],
        "witnesses": {
            "epsilon_hat": list(candidate_profile.witness_ids.get("epsilon", ()))
        },
    }
    lines = [f"epsilon_hat: {_fmt(report['epsilon_hat'])}"]
    for v in verdicts:
        status = "PASS" if v.passed else "FAIL"
        detail = f"epsilon {_fmt(v.observed_value)} vs threshold {_fmt(v.bound_value)}"
        if v.reason:
            detail += f" [{v.reason}]"
        lines.append(f"{v.check}: {status} ({detail})")
    _emit_report(report, args.out, lines)
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_CHECK_FAILED


def cmd_gen(args) -> int:
    try:
        with open(args.spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        print(f"error[DATA_ERROR]: cannot read {args.spec}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(f"error[CONFIG_ERROR]: {args.spec}: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not isinstance(data, dict):
        raise ConfigError(f"{args.spec}: top level must be an object")
    spec = ScenarioSpec.from_mapping(data)
    scenario = generate_scenario(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_evaluations(scenario.records_f, out_dir / "benchmark.csv")
    write_evaluations(scenario.records_g, out_dir / "candidate.csv")
    if scenario.pair_distances is not None:
        write_pair_distances(scenario.pair_distances, out_dir / "pair_distances.csv")
    gt_text = json.dumps(scenario.ground_truth, indent=2, sort_keys=True) + "\n"
    (out_dir / "ground_truth.json").write_text(gt_text, encoding="utf-8")
    print(gt_text, end="")
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    failures = run_selftest(args.trials, args.seed)
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; fold the latter into 1
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args)
    except AuditError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error[IO_ERROR]: {exc}", file=sys.stderr)
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
