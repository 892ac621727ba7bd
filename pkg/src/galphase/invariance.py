"""Frame-change laws for the open-curve geometric phase, as executable checks.

For a trajectory psi(t) on [0, T] and a passive boost with velocity v, the
open-curve geometric phase factor transforms as

    exp(i gamma[boosted]) = exp(i gamma[lab]) * F_overlap * F_momentum

where F_overlap is the symmetrized square-root ratio of endpoint overlaps
with exp(i v P T / hbar) inserted (realized here by a spectral translation of
psi(T) through v*T), and F_momentum = exp(-i (v/hbar) integral <P> dt). The
momentum integral can be traded, through the Ehrenfest relation
<P> = <A> + m d<Q>/dt, for a vector-potential integral plus a gauge-
independent endpoint term exp(-i (m v/hbar) (<Q>_T - <Q>_0)); and when the
lab curve is cyclic and the A integral vanishes, only the overlap factor
survives, which depends on v and T solely through the displacement v*T.

Every comparison is made between unit phase factors (modulus of a complex
difference), never between raw angles, so branch and mod-2pi choices cannot
produce spurious residuals. The checks are kinematic: they hold for the
sampled states themselves, whatever generated them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .boost import BoostParams, boost_trajectory
from .dynamics import Trajectory
from .errors import (
    OrthogonalStatesError,
    QuadratureResolutionWarning,
    ResolutionError,
)
from .grid import WaveFunction, inner_product, translate
from .phases import (
    DEFAULT_CYCLIC_TOLERANCE,
    DEFAULT_OVERLAP_FLOOR,
    PhaseReport,
    analyze,
)

# |integral <A> dt| below this counts as "vanishing" for the cyclic special case.
VANISHING_A_INTEGRAL = 1e-9

# Relative jump between consecutive <P> samples that triggers a quadrature warning.
QUADRATURE_JUMP_FRACTION = 0.1


@dataclass(frozen=True)
class TransformationReport:
    """Everything measured while checking the boost law on one trajectory.

    Complex fields are unit phase factors. Fields tied to the Hamiltonian
    (vector-potential integral, gauge-split residual) are None for synthetic
    trajectories; `residual_eq11` is None when the cyclic special case does
    not apply.
    """

    velocity: float
    gamma_aw_lab: float
    gamma_aw_boosted: float
    predicted_factor: complex
    residual_eq8: float
    overlap_ratio_factor: complex
    momentum_integral: float
    vector_potential_integral: Optional[float]
    endpoint_q_term: float
    residual_eq10: Optional[float]
    cyclic_case_applicable: bool
    residual_eq11: Optional[float]
    non_invariance_gap: float
    lab_cyclicity_defect: float
    boosted_cyclicity_defect: float


@dataclass(frozen=True)
class EhrenfestResult:
    """Pointwise residuals of <P> - <A> - m d<Q>/dt on interior samples."""

    times: np.ndarray
    residuals: np.ndarray
    max_abs_residual: float


@dataclass(frozen=True)
class GaugeSplitResult:
    """Gauge-split form of the boost law on one trajectory."""

    residual: float
    endpoint_factor: complex
    vector_potential_integral: float
    endpoint_q_term: float


@dataclass(frozen=True)
class CyclicCaseResult:
    """Cyclic special case of the boost law; `applicable` may be False."""

    applicable: bool
    reason: str
    residual: Optional[float]
    lab_cyclicity_defect: float
    vector_potential_integral: Optional[float]


def endpoint_overlap_factor(
    psi0: WaveFunction,
    psi_final: WaveFunction,
    displacement: float,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
) -> complex:
    """Unit factor from the endpoint overlaps with a translation inserted.

    Computes the square-root of the symmetrized ratio

        [<psi0|S psi_T> <psi_T|psi0>] / [<psi0|psi_T> <psi_T|S^dagger psi0>]

    with S the translation through `displacement`. The ratio has unit modulus
    and the square root is resolved by assigning each overlap its principal
    argument, i.e. the returned factor is exp(i (arg z_shifted - arg z));
    as a unit factor this is insensitive to mod-2pi folds and agrees with the
    literal principal square root whenever the argument difference stays
    within (-pi/2, pi/2]. Depends on the boost only through the displacement.
    """
    z = inner_product(psi0, psi_final)
    if abs(z) <= overlap_floor:
        raise OrthogonalStatesError(
            f"endpoint overlap modulus {abs(z):.3e} at or below floor; "
            f"the phase law is undefined here"
        )
    z_shifted = inner_product(psi0, translate(psi_final, displacement))
    if abs(z_shifted) <= overlap_floor:
        raise OrthogonalStatesError(
            f"translated endpoint overlap modulus {abs(z_shifted):.3e} at or "
            f"below floor; the phase law is undefined here"
        )
    ratio = z_shifted * np.conj(z)
    return complex(ratio / abs(ratio))


def momentum_integral(traj: Trajectory) -> float:
    """Trapezoidal integral of <P>(t) over the sample times.

    Warns when <P> jumps by more than 10% of its scale between consecutive
    samples; the quadrature is then too coarse for tight phase-law residuals.
    """
    series = traj.expect_p_series()
    if len(series) < 2:
        return 0.0
    scale = max(float(np.max(np.abs(series))), 1e-12)
    worst_jump = float(np.max(np.abs(np.diff(series))))
    if worst_jump > QUADRATURE_JUMP_FRACTION * scale:
        warnings.warn(
            f"<P> jumps by {worst_jump:.3e} between samples "
            f"(scale {scale:.3e}); refine sampling for reliable quadrature",
            QuadratureResolutionWarning,
            stacklevel=2,
        )
    return float(np.trapezoid(series, traj.times))


def vector_potential_integral(traj: Trajectory) -> float:
    """Trapezoidal integral of the uniform A(t) over the sample times."""
    if traj.hamiltonian is None:
        raise ValueError("trajectory carries no Hamiltonian, so A(t) is unknown")
    series = np.array(
        [traj.hamiltonian.vector_potential(float(t)) for t in traj.times]
    )
    if len(series) < 2:
        return 0.0
    return float(np.trapezoid(series, traj.times))


def predicted_boost_factor(
    traj: Trajectory,
    boost: BoostParams,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
) -> complex:
    """Unit factor by which the lab phase factor is predicted to change.

    Product of the endpoint overlap factor (translation through v*T) and
    exp(-i (v/hbar) integral <P> dt).
    """
    v = boost.velocity
    factor = endpoint_overlap_factor(
        traj.initial, traj.final, v * traj.duration, overlap_floor
    )
    integral = momentum_integral(traj)
    return factor * complex(np.exp(-1j * v * integral / boost.hbar))


def ehrenfest_decomposition(traj: Trajectory) -> EhrenfestResult:
    """Residuals of <P> = <A> + m d<Q>/dt on the interior sample times.

    d<Q>/dt is taken by central differences, so the residual floor is
    O(dt^2) even for exact states. Needs at least 3 samples and a trajectory
    that carries its Hamiltonian (for m and A).
    """
    if traj.hamiltonian is None:
        raise ValueError("trajectory carries no Hamiltonian, so A(t) is unknown")
    if len(traj) < 3:
        raise ResolutionError(
            "Ehrenfest residuals need at least 3 samples for central differences"
        )
    times = traj.times
    q = traj.expect_q_series()
    p = traj.expect_p_series()
    a = np.array([traj.hamiltonian.vector_potential(float(t)) for t in times])
    dq_dt = (q[2:] - q[:-2]) / (times[2:] - times[:-2])
    residuals = p[1:-1] - a[1:-1] - traj.hamiltonian.mass * dq_dt
    return EhrenfestResult(
        times=times[1:-1],
        residuals=residuals,
        max_abs_residual=float(np.max(np.abs(residuals))),
    )


def verify_transformation_law(
    traj: Trajectory,
    boost: BoostParams,
    boosted: Optional[Trajectory] = None,
    cyclic_tolerance: float = DEFAULT_CYCLIC_TOLERANCE,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
) -> TransformationReport:
    """Check the boost transformation law on one trajectory, both routes.

    The boosted-frame phase is computed directly (boost every sample, then
    apply the phase functionals) and compared against the lab-frame phase
    multiplied by the predicted factor; `residual_eq8` is the modulus of the
    difference of the two unit factors. When the trajectory carries its
    Hamiltonian the gauge-split prediction (vector-potential integral plus
    endpoint term) and, where applicable, the cyclic special case
    (overlap factor only) are checked as well.

    Pass `boosted` to reuse an already-boosted trajectory; it must be
    boost_trajectory(traj, boost).
    """
    v = boost.velocity
    lab = analyze(traj, cyclic_tolerance, overlap_floor)
    if boosted is None:
        boosted = boost_trajectory(traj, boost)
    moving = analyze(boosted, cyclic_tolerance, overlap_floor)

    overlap_factor = endpoint_overlap_factor(
        traj.initial, traj.final, v * traj.duration, overlap_floor
    )
    p_integral = momentum_integral(traj)
    predicted_factor = overlap_factor * complex(
        np.exp(-1j * v * p_integral / boost.hbar)
    )

    direct = complex(np.exp(1j * moving.aw_phase))
    lab_factor = complex(np.exp(1j * lab.aw_phase))
    residual_eq8 = abs(direct - lab_factor * predicted_factor)
    gap = abs(direct - lab_factor)

    from .grid import expect_q

    q0 = expect_q(traj.initial)
    q_final = expect_q(traj.final)
    endpoint_q_term = boost.mass * v * (q_final - q0) / boost.hbar

    a_integral: Optional[float] = None
    residual_eq10: Optional[float] = None
    if traj.hamiltonian is not None:
        a_integral = vector_potential_integral(traj)
        eq10_prediction = (
            lab_factor
            * overlap_factor
            * complex(np.exp(-1j * v * a_integral / boost.hbar))
            * complex(np.exp(-1j * endpoint_q_term))
        )
        residual_eq10 = abs(direct - eq10_prediction)

    applicable = (
        lab.cyclicity_defect < cyclic_tolerance
        and a_integral is not None
        and abs(a_integral) < VANISHING_A_INTEGRAL
    )
    residual_eq11: Optional[float] = None
    if applicable:
        residual_eq11 = abs(direct - lab_factor * overlap_factor)

    return TransformationReport(
        velocity=v,
        gamma_aw_lab=lab.aw_phase,
        gamma_aw_boosted=moving.aw_phase,
        predicted_factor=predicted_factor,
        residual_eq8=residual_eq8,
        overlap_ratio_factor=overlap_factor,
        momentum_integral=p_integral,
        vector_potential_integral=a_integral,
        endpoint_q_term=endpoint_q_term,
        residual_eq10=residual_eq10,
        cyclic_case_applicable=applicable,
        residual_eq11=residual_eq11,
        non_invariance_gap=gap,
        lab_cyclicity_defect=lab.cyclicity_defect,
        boosted_cyclicity_defect=moving.cyclicity_defect,
    )


def verify_gauge_split_law(
    traj: Trajectory,
    boost: BoostParams,
    boosted: Optional[Trajectory] = None,
    cyclic_tolerance: float = DEFAULT_CYCLIC_TOLERANCE,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
) -> GaugeSplitResult:
    """Boost law with the momentum integral split per the Ehrenfest relation.

    Requires the trajectory to carry its Hamiltonian. On cyclic curves the
    endpoint factor must be unity (equal endpoint position means), which the
    returned `endpoint_factor` makes checkable.
    """
    if traj.hamiltonian is None:
        raise ValueError("gauge-split law needs the trajectory's Hamiltonian")
    report = verify_transformation_law(
        traj, boost, boosted, cyclic_tolerance, overlap_floor
    )
    assert report.residual_eq10 is not None and report.vector_potential_integral is not None
    return GaugeSplitResult(
        residual=report.residual_eq10,
        endpoint_factor=complex(np.exp(-1j * report.endpoint_q_term)),
        vector_potential_integral=report.vector_potential_integral,
        endpoint_q_term=report.endpoint_q_term,
    )


def verify_cyclic_special_case(
    traj: Trajectory,
    boost: BoostParams,
    boosted: Optional[Trajectory] = None,
    cyclic_tolerance: float = DEFAULT_CYCLIC_TOLERANCE,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
) -> CyclicCaseResult:
    """Overlap-factor-only form of the law for cyclic curves with zero A integral.

    Unmet preconditions yield an inapplicable marker, not a failure.
    """
    report = verify_transformation_law(
        traj, boost, boosted, cyclic_tolerance, overlap_floor
    )
    if report.cyclic_case_applicable:
        reason = "applicable"
    elif report.lab_cyclicity_defect >= cyclic_tolerance:
        reason = (
            f"lab trajectory is not cyclic "
            f"(defect {report.lab_cyclicity_defect:.3e})"
        )
    elif report.vector_potential_integral is None:
        reason = "trajectory carries no Hamiltonian"
    else:
        reason = (
            f"vector-potential integral {report.vector_potential_integral:.3e} "
            f"does not vanish"
        )
    return CyclicCaseResult(
        applicable=report.cyclic_case_applicable,
        reason=reason,
        residual=report.residual_eq11,
        lab_cyclicity_defect=report.lab_cyclicity_defect,
        vector_potential_integral=report.vector_potential_integral,
    )
