"""Command-line scenario runner.

Usage:
    galphase run <config> [--out DIR] [--format text,csv] [--jobs N] [--verbose]

Exit codes:
    0  every requested check passed (or was not applicable)
    1  at least one check failed
    2  the configuration could not be read or validated
    3  a physics-domain error (guard-band overflow or infeasible scenario)
"""

from __future__ import annotations

import argparse
import sys

from .config import load_scenario
from .errors import (
    ConfigError,
    DomainOverflowError,
    GalphaseError,
    NumericalBlowupError,
)
from .report import emit_report
from .runner import RunReport, run_scenario

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_PHYSICS_ERROR = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galphase",
        description=(
            "Compute geometric phases of simulated 1D quantum trajectories "
            "and verify how they transform under Galilean boosts."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario config and emit reports")
    run.add_argument("config", help="path to a scenario file (YAML)")
    run.add_argument(
        "--out", default="out", help="output directory for report files"
    )
    run.add_argument(
        "--format",
        default="text,csv",
        help="comma-separated output formats: text (YAML report) and/or csv",
    )
    run.add_argument(
        "--jobs", type=int, default=1, help="parallel workers for the boost sweep"
    )
    run.add_argument(
        "--verbose", action="store_true", help="print progress while running"
    )
    return parser


def _print_summary(report: RunReport) -> None:
    print(f"scenario: {report.label}")
    p = report.lab_phases
    aa = "n/a (not cyclic)" if p.aa_phase is None else f"{p.aa_phase:+.9f}"
    print(
        f"  lab phases: total {p.total_phase:+.9f}  dynamic {p.dynamic_phase:+.9f}  "
        f"aa {aa}  aw {p.aw_phase:+.9f}  defect {p.cyclicity_defect:.3e}"
    )
    for r in report.transformations:
        print(
            f"  v={r.velocity:<6g} gap {r.non_invariance_gap:.3e}  "
            f"eq8 residual {r.residual_eq8:.3e}  "
            f"boosted defect {r.boosted_cyclicity_defect:.3e}"
        )
    for c in report.checks:
        flag = {"pass": "PASS", "fail": "FAIL", "not-applicable": "N/A "}[c.status]
        res = "" if c.residual is None else f" residual={c.residual:.3e}"
        tol = "" if c.tolerance is None else f" tol={c.tolerance:g}"
        print(f"  [{flag}] {c.name}{res}{tol}  {c.detail}")
    print(
        f"  summary: {sum(c.status == 'pass' for c in report.checks)} pass, "
        f"{sum(c.status == 'fail' for c in report.checks)} fail, "
        f"{sum(c.status == 'not-applicable' for c in report.checks)} n/a "
        f"({report.runtime_seconds:.1f}s)"
    )


def _run(args: argparse.Namespace) -> int:
    try:
        cfg = load_scenario(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except DomainOverflowError as exc:
        print(f"infeasible scenario: {exc}", file=sys.stderr)
        return EXIT_PHYSICS_ERROR

    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    unknown = set(formats) - {"text", "csv"}
    if unknown:
        print(f"unknown --format value(s): {sorted(unknown)}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    try:
        report = run_scenario(cfg, jobs=max(1, args.jobs), verbose=args.verbose)
    except (DomainOverflowError, NumericalBlowupError) as exc:
        print(f"physics-domain error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS_ERROR
    except GalphaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS_ERROR

    written = emit_report(report, args.out, formats)
    _print_summary(report)
    for path in written:
        print(f"  wrote {path}")
    return EXIT_OK if report.all_passed else EXIT_CHECK_FAILED


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _run(args)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
