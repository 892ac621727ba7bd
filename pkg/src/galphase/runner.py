"""Scenario execution: build, evolve, verify, and collect results."""

from __future__ import annotations

import math
import time as _time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .boost import BoostParams, boost_trajectory, check_operator_transforms
from .config import GAUGE_SENSITIVITY_LAMBDA, ScenarioConfig
from .dynamics import (
    HamiltonianSpec,
    Trajectory,
    evolve,
    free_particle,
    gauge_transform,
    harmonic_oscillator,
    phase_lift,
    polynomial_potential,
    time_warp,
)
from .grid import Grid, WaveFunction
from .invariance import TransformationReport, ehrenfest_decomposition, verify_transformation_law
from .phases import PhaseReport, analyze, aw_phase, geodesic_closure_phase, per_step_phases, principal_angle
from .states import coherent_state, gaussian_packet


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check: pass, fail, or not-applicable."""

    name: str
    status: str  # "pass" | "fail" | "not-applicable"
    residual: Optional[float]
    tolerance: Optional[float]
    detail: str = ""


@dataclass(frozen=True)
class SeriesData:
    """Flat time series of one trajectory, ready for CSV emission."""

    name: str
    times: np.ndarray
    expect_q: np.ndarray
    expect_p: np.ndarray
    delta_eta: np.ndarray  # per-step increments, 0.0 in the first row
    delta_eta_cum: np.ndarray


@dataclass(frozen=True)
class RunReport:
    """Everything one scenario run produced."""

    label: str
    config: dict
    lab_phases: PhaseReport
    transformations: tuple[TransformationReport, ...]
    checks: tuple[CheckResult, ...]
    series: tuple[SeriesData, ...]
    runtime_seconds: float
    timestamp: str
    toolkit_version: str = __version__

    @property
    def all_passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)


def build_grid(cfg: ScenarioConfig) -> Grid:
    return Grid(
        n_points=cfg.grid.n_points,
        x_min=cfg.grid.x_min,
        dx=cfg.grid.dx,
        hbar=cfg.units.hbar,
    )


def build_hamiltonian(cfg: ScenarioConfig) -> HamiltonianSpec:
    a_value = cfg.vector_potential.value if cfg.vector_potential.kind == "constant" else 0.0
    kind = cfg.potential.kind
    if kind == "free":
        return free_particle(cfg.units.mass, cfg.units.hbar, a_value)
    if kind == "harmonic":
        assert cfg.potential.omega is not None
        return harmonic_oscillator(
            cfg.potential.omega, cfg.units.mass, cfg.units.hbar, a_value
        )
    assert cfg.potential.coefficients is not None
    return polynomial_potential(
        cfg.potential.coefficients, cfg.units.mass, cfg.units.hbar, a_value
    )


def build_initial_state(cfg: ScenarioConfig, grid: Grid) -> WaveFunction:
    ini = cfg.initial_state
    if ini.kind == "gaussian":
        return gaussian_packet(grid, ini.center, ini.width, ini.momentum)
    return coherent_state(grid, ini.alpha, ini.omega, cfg.units.mass)


def _series_from(name: str, traj: Trajectory, overlap_floor: float) -> SeriesData:
    steps = per_step_phases(traj, overlap_floor)
    delta = np.concatenate([[0.0], steps])
    return SeriesData(
        name=name,
        times=traj.times,
        expect_q=traj.expect_q_series(),
        expect_p=traj.expect_p_series(),
        delta_eta=delta,
        delta_eta_cum=np.cumsum(delta),
    )


def _sanitize_velocity(v: float) -> str:
    return f"{v:g}".replace("-", "m").replace(".", "p")


def _check_eq8(
    cfg: ScenarioConfig, reports: list[TransformationReport]
) -> CheckResult:
    tol = cfg.tolerance("eq8")
    gap_min = cfg.tolerance("gap_min")
    gap_zero = cfg.tolerance("gap_zero")
    worst = max((r.residual_eq8 for r in reports), default=0.0)
    failures = []
    for r in reports:
        if r.residual_eq8 >= tol:
            failures.append(f"v={r.velocity:g}: residual {r.residual_eq8:.3e}")
        if r.velocity == 0.0 and r.non_invariance_gap > gap_zero:
            failures.append(
                f"v=0: gap {r.non_invariance_gap:.3e} should vanish"
            )
        if r.velocity != 0.0 and r.non_invariance_gap <= gap_min:
            failures.append(
                f"v={r.velocity:g}: gap {r.non_invariance_gap:.3e} "
                f"not above {gap_min:g}"
            )
    detail = "; ".join(failures) if failures else (
        "law holds and the phase factor moves for every v != 0"
    )
    return CheckResult(
        name="eq8",
        status="fail" if failures else "pass",
        residual=worst,
        tolerance=tol,
        detail=detail,
    )


def _check_eq10(
    cfg: ScenarioConfig, reports: list[TransformationReport]
) -> CheckResult:
    tol = cfg.tolerance("eq10")
    endpoint_tol = cfg.tolerance("endpoint_q_factor")
    cyclic_tol = cfg.tolerance("cyclic_tolerance")
    residuals = [r.residual_eq10 for r in reports if r.residual_eq10 is not None]
    if not residuals:
        return CheckResult(
            "eq10", "not-applicable", None, tol, "no Hamiltonian on the trajectory"
        )
    failures = []
    for r in reports:
        if r.residual_eq10 is not None and r.residual_eq10 >= tol:
            failures.append(f"v={r.velocity:g}: residual {r.residual_eq10:.3e}")
        if r.lab_cyclicity_defect < cyclic_tol:
            endpoint_dev = abs(np.exp(-1j * r.endpoint_q_term) - 1.0)
            if endpoint_dev >= endpoint_tol:
                failures.append(
                    f"v={r.velocity:g}: endpoint factor deviates by "
                    f"{endpoint_dev:.3e} on a cyclic curve"
                )
    return CheckResult(
        name="eq10",
        status="fail" if failures else "pass",
        residual=max(residuals),
        tolerance=tol,
        detail="; ".join(failures) if failures else "gauge-split prediction matches",
    )


def _check_eq11(
    cfg: ScenarioConfig, reports: list[TransformationReport], traj: Trajectory
) -> CheckResult:
    tol = cfg.tolerance("eq11")
    disp_tol = cfg.tolerance("displacement_factor")
    applicable = [r for r in reports if r.cyclic_case_applicable]
    if not applicable:
        return CheckResult(
            "eq11",
            "not-applicable",
            None,
            tol,
            "needs a cyclic lab trajectory with vanishing A integral",
        )
    failures = []
    for r in applicable:
        assert r.residual_eq11 is not None
        if r.residual_eq11 >= tol:
            failures.append(f"v={r.velocity:g}: residual {r.residual_eq11:.3e}")
    # The surviving factor must depend on (v, T) only through v*T: two
    # decompositions of the same displacement must give the same factor.
    from .invariance import endpoint_overlap_factor

    floor = cfg.tolerance("overlap_floor")
    slow_v, slow_t = 0.5, 2.0
    fast_v, fast_t = 2.0, 0.5
    f_slow = endpoint_overlap_factor(traj.initial, traj.final, slow_v * slow_t, floor)
    f_fast = endpoint_overlap_factor(traj.initial, traj.final, fast_v * fast_t, floor)
    disp_dev = abs(f_slow - f_fast)
    if disp_dev >= disp_tol:
        failures.append(f"displacement-only property violated: {disp_dev:.3e}")
    return CheckResult(
        name="eq11",
        status="fail" if failures else "pass",
        residual=max(r.residual_eq11 for r in applicable),
        tolerance=tol,
        detail="; ".join(failures) if failures else "overlap-factor-only form matches",
    )


def _check_operator_transforms(
    cfg: ScenarioConfig, psi0: WaveFunction, boosts: list[BoostParams]
) -> CheckResult:
    tol_q = cfg.tolerance("operator_q")
    tol_p = cfg.tolerance("operator_p")
    duration = cfg.evolution.duration
    probe_times = [0.0, 0.5 * duration, duration]
    worst_q = worst_p = 0.0
    for b in boosts:
        for t in probe_times:
            r_q, r_p = check_operator_transforms(psi0, t, b)
            worst_q = max(worst_q, r_q)
            worst_p = max(worst_p, r_p)
    ok = worst_q < tol_q and worst_p < tol_p
    return CheckResult(
        name="operator_transforms",
        status="pass" if ok else "fail",
        residual=max(worst_q, worst_p),
        tolerance=max(tol_q, tol_p),
        detail=f"max r_q {worst_q:.3e} (tol {tol_q:g}), max r_p {worst_p:.3e} (tol {tol_p:g})",
    )


def _check_ehrenfest(cfg: ScenarioConfig, traj: Trajectory) -> CheckResult:
    tol = cfg.tolerance("ehrenfest")
    result = ehrenfest_decomposition(traj)
    ok = result.max_abs_residual < tol
    return CheckResult(
        name="ehrenfest",
        status="pass" if ok else "fail",
        residual=result.max_abs_residual,
        tolerance=tol,
        detail=f"max interior residual {result.max_abs_residual:.3e}",
    )


def _check_geodesic_closure(cfg: ScenarioConfig, traj: Trajectory) -> CheckResult:
    tol = cfg.tolerance("geodesic_closure")
    floor = cfg.tolerance("overlap_floor")
    aw = aw_phase(traj, floor)
    closed = geodesic_closure_phase(traj, 64, floor)
    gap = abs(principal_angle(aw - closed))
    return CheckResult(
        name="geodesic_closure",
        status="pass" if gap < tol else "fail",
        residual=gap,
        tolerance=tol,
        detail=f"|aw - closure| = {gap:.3e} at 64 geodesic segments",
    )


def _check_reparametrization(cfg: ScenarioConfig, traj: Trajectory) -> CheckResult:
    tol_warp = cfg.tolerance("reparametrization")
    tol_lift = cfg.tolerance("phase_lift")
    floor = cfg.tolerance("overlap_floor")
    aw = aw_phase(traj, floor)

    duration = traj.duration
    t0 = float(traj.times[0])
    if duration > 0:
        warped = time_warp(
            traj,
            lambda t: t0
            + (t - t0) * (1.0 + 0.3 * ((t - t0) / duration) ** 2) / 1.3,
        )
        warp_gap = abs(principal_angle(aw_phase(warped, floor) - aw))
    else:
        warp_gap = 0.0

    rng = np.random.default_rng(20260810)
    jumps = rng.uniform(-0.9 * math.pi / 8, 0.9 * math.pi / 8, size=len(traj) - 1)
    chis = np.concatenate([[0.0], np.cumsum(jumps)])
    lifted = phase_lift(traj, chis)
    lift_gap = abs(principal_angle(aw_phase(lifted, floor) - aw))

    ok = warp_gap < tol_warp and lift_gap < tol_lift
    return CheckResult(
        name="reparametrization",
        status="pass" if ok else "fail",
        residual=max(warp_gap, lift_gap),
        tolerance=max(tol_warp, tol_lift),
        detail=f"time-warp gap {warp_gap:.3e}, phase-lift gap {lift_gap:.3e}",
    )


def _check_gauge_sensitivity(cfg: ScenarioConfig, traj: Trajectory) -> CheckResult:
    """A local phase with genuine (x, t) dependence must move the phase.

    Uses f(x, t) = lambda * x * (t - t0) / T. The time dependence is
    essential: a t-independent pointwise phase is one fixed unitary applied
    to the whole curve and leaves every overlap, hence every phase
    functional, exactly unchanged.
    """
    threshold = cfg.tolerance("gauge_change_min")
    floor = cfg.tolerance("overlap_floor")
    duration = traj.duration
    if duration <= 0:
        return CheckResult(
            "gauge_sensitivity", "not-applicable", None, threshold, "zero duration"
        )
    t0 = float(traj.times[0])
    lam = GAUGE_SENSITIVITY_LAMBDA
    gauged = gauge_transform(
        traj, lambda x, t: lam * x * (t - t0) / duration
    )
    change = abs(principal_angle(aw_phase(gauged, floor) - aw_phase(traj, floor)))
    return CheckResult(
        name="gauge_sensitivity",
        status="pass" if change > threshold else "fail",
        residual=change,
        tolerance=threshold,
        detail=f"aw moved by {change:.3e} under f = {lam:g}*x*t/T (must exceed threshold)",
    )


def run_scenario(
    cfg: ScenarioConfig, jobs: int = 1, verbose: bool = False
) -> RunReport:
    """Evolve the configured system and execute every requested check."""
    started = _time.time()
    timestamp = _time.strftime("%Y-%m-%dT%H:%M:%S%z")
    log = print if verbose else (lambda *a, **k: None)

    grid = build_grid(cfg)
    ham = build_hamiltonian(cfg)
    psi0 = build_initial_state(cfg, grid)
    floor = cfg.tolerance("overlap_floor")
    cyclic_tol = cfg.tolerance("cyclic_tolerance")

    log(f"[{cfg.label}] evolving: T={cfg.evolution.duration:g}, "
        f"n_steps={cfg.evolution.n_steps}, grid n={grid.n_points}")
    traj = evolve(
        psi0,
        ham,
        cfg.evolution.duration,
        cfg.evolution.n_steps,
        cfg.evolution.sample_every,
    )
    lab_phases = analyze(traj, cyclic_tol, floor)

    boosts = [
        BoostParams(v, cfg.units.mass, cfg.units.hbar) for v in cfg.boosts
    ]

    def _transform(b: BoostParams) -> tuple[TransformationReport, SeriesData]:
        log(f"[{cfg.label}] boosting and verifying at v={b.velocity:g}")
        boosted = boost_trajectory(traj, b)
        report = verify_transformation_law(
            traj, b, boosted, cyclic_tol, floor
        )
        series = _series_from(
            f"boost_v{_sanitize_velocity(b.velocity)}", boosted, floor
        )
        return report, series

    if boosts:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(_transform, boosts))
        else:
            outcomes = [_transform(b) for b in boosts]
        reports = [r for r, _ in outcomes]
        boost_series = [s for _, s in outcomes]
    else:
        reports, boost_series = [], []

    checks: list[CheckResult] = []
    for name in cfg.checks:
        log(f"[{cfg.label}] check: {name}")
        if name == "eq8":
            checks.append(_check_eq8(cfg, reports))
        elif name == "eq10":
            checks.append(_check_eq10(cfg, reports))
        elif name == "eq11":
            checks.append(_check_eq11(cfg, reports, traj))
        elif name == "operator_transforms":
            checks.append(_check_operator_transforms(cfg, psi0, boosts))
        elif name == "ehrenfest":
            checks.append(_check_ehrenfest(cfg, traj))
        elif name == "geodesic_closure":
            checks.append(_check_geodesic_closure(cfg, traj))
        elif name == "reparametrization":
            checks.append(_check_reparametrization(cfg, traj))
        elif name == "gauge_sensitivity":
            checks.append(_check_gauge_sensitivity(cfg, traj))

    series = [_series_from("lab", traj, floor)] + boost_series
    return RunReport(
        label=cfg.label,
        config=cfg.effective_dict(),
        lab_phases=lab_phases,
        transformations=tuple(reports),
        checks=tuple(checks),
        series=tuple(series),
        runtime_seconds=_time.time() - started,
        timestamp=timestamp,
    )
