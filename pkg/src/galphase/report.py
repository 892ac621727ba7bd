"""Report emission: a nested key-value report (YAML) plus flat CSV series.

The report body is deterministic for a given config: keys are sorted, floats
are written with full round-trip precision, complex numbers as {re, im}
pairs. Only the `meta` block (timestamp, runtime) varies between identical
runs; comparisons of report bodies should drop it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np
import yaml

from .invariance import TransformationReport
from .phases import PhaseReport
from .runner import CheckResult, RunReport, SeriesData

CSV_HEADER = "t,expect_q,expect_p,delta_eta,delta_eta_cum"


def _num(x) -> float:
    return float(x)


def _cnum(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _phases_dict(p: PhaseReport) -> dict:
    return {
        "total_phase": _num(p.total_phase),
        "dynamic_phase": _num(p.dynamic_phase),
        "aa_phase": None if p.aa_phase is None else _num(p.aa_phase),
        "aw_phase": _num(p.aw_phase),
        "cyclicity_defect": _num(p.cyclicity_defect),
        "n_samples": int(len(p.per_step_phases) + 1),
    }


def _transformation_dict(r: TransformationReport) -> dict:
    return {
        "velocity": _num(r.velocity),
        "gamma_aw_lab": _num(r.gamma_aw_lab),
        "gamma_aw_boosted": _num(r.gamma_aw_boosted),
        "predicted_factor": _cnum(r.predicted_factor),
        "overlap_ratio_factor": _cnum(r.overlap_ratio_factor),
        "residual_eq8": _num(r.residual_eq8),
        "momentum_integral": _num(r.momentum_integral),
        "vector_potential_integral": (
            None
            if r.vector_potential_integral is None
            else _num(r.vector_potential_integral)
        ),
        "endpoint_q_term": _num(r.endpoint_q_term),
        "residual_eq10": None if r.residual_eq10 is None else _num(r.residual_eq10),
        "cyclic_case_applicable": bool(r.cyclic_case_applicable),
        "residual_eq11": None if r.residual_eq11 is None else _num(r.residual_eq11),
        "non_invariance_gap": _num(r.non_invariance_gap),
        "lab_cyclicity_defect": _num(r.lab_cyclicity_defect),
        "boosted_cyclicity_defect": _num(r.boosted_cyclicity_defect),
    }


def _check_dict(c: CheckResult) -> dict:
    return {
        "name": c.name,
        "status": c.status,
        "residual": None if c.residual is None else _num(c.residual),
        "tolerance": None if c.tolerance is None else _num(c.tolerance),
        "detail": c.detail,
    }


def report_body(report: RunReport) -> dict:
    """The deterministic part of the report (everything except `meta`)."""
    checks = [_check_dict(c) for c in report.checks]
    return {
        "label": report.label,
        "config": report.config,
        "phases": _phases_dict(report.lab_phases),
        "transformations": [
            _transformation_dict(r) for r in report.transformations
        ],
        "checks": checks,
        "summary": {
            "n_pass": sum(c.status == "pass" for c in report.checks),
            "n_fail": sum(c.status == "fail" for c in report.checks),
            "n_not_applicable": sum(
                c.status == "not-applicable" for c in report.checks
            ),
            "all_passed": report.all_passed,
        },
    }


def report_document(report: RunReport) -> dict:
    doc = {"meta": {
        "generated_at": report.timestamp,
        "runtime_seconds": float(report.runtime_seconds),
        "toolkit_version": report.toolkit_version,
    }}
    doc.update(report_body(report))
    return doc


class _ReportDumper(yaml.SafeDumper):
    pass


def _repr_float(dumper: yaml.SafeDumper, value: float):
    # repr round-trips float64 exactly and is deterministic across runs
    if value != value or value in (float("inf"), float("-inf")):
        return yaml.SafeDumper.represent_float(dumper, value)
    return dumper.represent_scalar("tag:yaml.org,2002:float", repr(float(value)))


_ReportDumper.add_representer(float, _repr_float)


def dump_report_yaml(report: RunReport) -> str:
    return yaml.dump(
        report_document(report),
        Dumper=_ReportDumper,
        sort_keys=True,
        default_flow_style=False,
    )


def _format_row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def write_series_csv(series: SeriesData, path: Path) -> None:
    rows = [CSV_HEADER]
    for t, q, p, de, dc in zip(
        series.times,
        series.expect_q,
        series.expect_p,
        series.delta_eta,
        series.delta_eta_cum,
    ):
        rows.append(_format_row((t, q, p, de, dc)))
    path.write_text("\n".join(rows) + "\n")


def emit_report(
    report: RunReport, out_dir: str | Path, formats: Iterable[str] = ("text", "csv")
) -> list[Path]:
    """Write the report files; returns the paths written.

    `text` produces <label>_report.yaml (nested key-value report); `csv`
    produces one <label>_series_*.csv per stored trajectory, columns
    t, expect_q, expect_p, delta_eta, delta_eta_cum (the delta_eta column
    sums to the reported dynamic phase).
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    formats = set(formats)
    unknown = formats - {"text", "csv"}
    if unknown:
        raise ValueError(f"unknown report format(s): {sorted(unknown)}")
    written: list[Path] = []
    if "text" in formats:
        path = out / f"{report.label}_report.yaml"
        try:
            path.write_text(dump_report_yaml(report))
        except OSError as exc:
            raise OSError(f"cannot write report {path}: {exc}") from exc
        written.append(path)
    if "csv" in formats:
        for series in report.series:
            path = out / f"{report.label}_series_{series.name}.csv"
            try:
                write_series_csv(series, path)
            except OSError as exc:
                raise OSError(f"cannot write series {path}: {exc}") from exc
            written.append(path)
    return written
