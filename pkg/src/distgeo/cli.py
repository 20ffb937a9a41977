"""Command-line entry point: ``distgeo run | catalog | verify-all``.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .catalog import PRESET_ANCHORS, PRESET_NAMES
from .einstein import FAMILY_LABELS, family_case
from .report import dumps, load_scenario, run_scenario, verify_all


def _emit(report: dict, out, started: float) -> None:
    report["timing_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    text = dumps(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    started = time.perf_counter()
    try:
        sc = load_scenario(args.file)
    except json.JSONDecodeError as exc:
        print(f"error: {args.file}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError, ArithmeticError) as exc:
        print(f"error: {args.file}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = run_scenario(sc, args.strict_golden)
    _emit(report, args.out, started)
    return 0 if report["summary"]["pass"] else 1


def cmd_catalog(args) -> int:
    print("scenarios:")
    for name in PRESET_NAMES:
        print(f"  {name} ({PRESET_ANCHORS[name]})")
    print("families:")
    for label in FAMILY_LABELS:
        case = family_case(label)
        print(f"  {label} ({case.note})  {case.anchor}, {case.kind} {case.check}")
    return 0


def cmd_verify_all(args) -> int:
    started = time.perf_counter()
    report = verify_all(args.seed, args.strict_golden)
    _emit(report, args.out, started)
    return 0 if report["summary"]["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distgeo", description="Curvature of distributions in frame manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the checks listed in a scenario file")
    run.add_argument("file")
    run.add_argument("--out", help="write the JSON report here instead of stdout")
    run.add_argument("--strict-golden", action="store_true", help="treat golden mismatches as failures")
    run.add_argument("--seed", type=int, default=42, help="accepted for symmetry; scenario runs are deterministic")
    run.set_defaults(func=cmd_run)

    cat = sub.add_parser("catalog", help="list preset scenarios and solution families")
    cat.set_defaults(func=cmd_catalog)

    ver = sub.add_parser("verify-all", help="run the full self-verification suite")
    ver.add_argument("--seed", type=int, default=42)
    ver.add_argument("--strict-golden", action="store_true", help="treat findings and golden mismatches as failures")
    ver.add_argument("--out", help="write the JSON report here instead of stdout")
    ver.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
