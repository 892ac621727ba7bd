"""Phase functionals of a trajectory: total, dynamic, and geometric parts.

Conventions, fixed once for the whole toolkit:

- The total (Pancharatnam) phase is arg<psi(0)|psi(T)> in (-pi, pi]. The
  symmetrized square-root form (z / conj(z))^(1/2) that defines the open-curve
  geometric phase factor is resolved on the principal branch, i.e. as
  exp(i arg z); this is continuous in z away from the negative real axis and
  reduces to the cyclic-phase convention when the curve closes.
- The dynamic phase is the unwrapped accumulation of per-step overlap phases
  delta_eta = arg<psi(t_k)|psi(t_{k+1})> and is reported without any mod-2pi
  reduction. When the trajectory carries its Hamiltonian, the equivalent form
  -(1/hbar) integral <H> dt is computed by trapezoidal quadrature and must
  agree; disagreement means the sampling is too coarse to trust.
- Geometric phases (cyclic and open-curve) are reduced to (-pi, pi].
  Cross-frame comparisons should always be made between the unit phase
  factors exp(i gamma), never between raw real values.

All functionals here depend only on the sequence of states, never on the time
labels, which makes reparametrization invariance exact by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dynamics import Trajectory, expect_energy
from .errors import NotCyclicError, OrthogonalStatesError, ResolutionError
from .grid import WaveFunction, inner_product

# Overlap modulus below which a relative phase is numerically meaningless.
DEFAULT_OVERLAP_FLOOR = 1e-6

# Default cyclicity tolerance on the defect 1 - |<psi(0)|psi(T)>|: far above
# propagator error, far below any genuinely open curve in the scenario suite.
DEFAULT_CYCLIC_TOLERANCE = 1e-4

# Per-step overlap phases beyond this magnitude cannot be unwrapped safely.
UNWRAP_SAFETY_BOUND = math.pi / 4

# Tolerated disagreement between the two forms of the dynamic phase.
HAMILTONIAN_FORM_TOLERANCE = 1e-4


def principal_angle(theta: float) -> float:
    """Reduce an angle to the principal interval (-pi, pi]."""
    r = math.remainder(theta, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def local_phase_change(
    a: WaveFunction,
    b: WaveFunction,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
) -> float:
    """Relative phase arg<a|b> in (-pi, pi] between two nearby states.

    This is the exact finite-step value of the local phase increment; for
    infinitesimally separated states it approaches Im<psi|d psi>. States
    whose overlap modulus is at or below `overlap_floor` have no meaningful
    relative phase and raise OrthogonalStatesError.
    """
    z = inner_product(a, b)
    if abs(z) <= overlap_floor:
        raise OrthogonalStatesError(
            f"overlap modulus {abs(z):.3e} at or below floor {overlap_floor:.1e}; "
            f"phase undefined"
        )
    return float(np.angle(z))


def per_step_phases(
    traj: Trajectory, overlap_floor: float = DEFAULT_OVERLAP_FLOOR
) -> np.ndarray:
    """delta_eta increments between consecutive samples (length len(traj)-1)."""
    return np.array(
        [
            local_phase_change(a, b, overlap_floor)
            for a, b in zip(traj.states[:-1], traj.states[1:])
        ]
    )


def dynamic_phase(
    traj: Trajectory,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
    check_hamiltonian_form: bool = True,
    hamiltonian_form_tolerance: float = HAMILTONIAN_FORM_TOLERANCE,
) -> float:
    """Unwrapped dynamic phase: the sum of per-step overlap phases.

    Requires every per-step phase to stay under the unwrapping safety bound
    (resample finer otherwise). If the trajectory carries its Hamiltonian and
    `check_hamiltonian_form` is on, the independent form
    -(1/hbar) integral <H> dt is computed by trapezoidal quadrature over the
    samples and must agree within `hamiltonian_form_tolerance`.
    """
    steps = per_step_phases(traj, overlap_floor)
    if steps.size == 0:
        return 0.0
    worst = float(np.max(np.abs(steps)))
    if worst >= UNWRAP_SAFETY_BOUND:
        raise ResolutionError(
            f"per-step overlap phase {worst:.3f} rad exceeds the unwrapping "
            f"bound {UNWRAP_SAFETY_BOUND:.3f}; resample the trajectory finer"
        )
    gamma = float(np.sum(steps))
    if check_hamiltonian_form and traj.hamiltonian is not None:
        energies = np.array(
            [
                expect_energy(s, traj.hamiltonian, float(t))
                for s, t in zip(traj.states, traj.times)
            ]
        )
        gamma_h = -float(np.trapezoid(energies, traj.times)) / traj.hamiltonian.hbar
        if abs(gamma_h - gamma) > hamiltonian_form_tolerance:
            raise ResolutionError(
                f"dynamic-phase forms disagree: overlap sum {gamma:.9f} vs "
                f"energy integral {gamma_h:.9f} "
                f"(tolerance {hamiltonian_form_tolerance:.1e})"
            )
    return gamma


def total_phase(
    traj: Trajectory, overlap_floor: float = DEFAULT_OVERLAP_FLOOR
) -> float:
    """Endpoint (Pancharatnam) phase arg<psi(0)|psi(T)> in (-pi, pi]."""
    return local_phase_change(traj.initial, traj.final, overlap_floor)


def cyclicity_defect(traj: Trajectory) -> float:
    """1 - |<psi(0)|psi(T)>|: zero exactly when the ray curve closes."""
    return 1.0 - abs(inner_product(traj.initial, traj.final))


def aa_phase(
    traj: Trajectory,
    cyclic_tolerance: float = DEFAULT_CYCLIC_TOLERANCE,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
    check_hamiltonian_form: bool = True,
) -> float:
    """Geometric phase of a cyclic trajectory, in (-pi, pi].

    Total phase minus accumulated local phase changes. Raises NotCyclicError
    (carrying the defect) when the curve does not close within
    `cyclic_tolerance`; that error is meaningful in itself, since closure is
    relative to the frame in which the trajectory is described.
    """
    defect = cyclicity_defect(traj)
    if defect >= cyclic_tolerance:
        raise NotCyclicError(defect, cyclic_tolerance)
    return principal_angle(
        total_phase(traj, overlap_floor)
        - dynamic_phase(traj, overlap_floor, check_hamiltonian_form)
    )


def aw_phase(
    traj: Trajectory,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
    check_hamiltonian_form: bool = True,
) -> float:
    """Open-curve geometric phase, in (-pi, pi].

    Defined for arbitrary (non-cyclic) trajectories with non-orthogonal
    endpoints; coincides with aa_phase whenever the latter is defined.
    """
    return principal_angle(
        total_phase(traj, overlap_floor)
        - dynamic_phase(traj, overlap_floor, check_hamiltonian_form)
    )


def geodesic_closure_phase(
    traj: Trajectory,
    n_geodesic: int = 64,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
) -> float:
    """Cyclic geometric phase of the trajectory closed by a projective geodesic.

    The shortest ray-space path from psi(T) back to psi(0) is the normalized
    linear interpolation between psi(T) and the Pancharatnam-aligned
    representative exp(i arg<psi(0)|psi(T)>) psi(0); alignment makes every
    consecutive overlap along the closure real and positive, so the geodesic
    contributes no phase of its own. The returned value therefore equals
    aw_phase of the open curve (a property the tests pin down numerically).
    """
    if n_geodesic < 1:
        raise ValueError(f"n_geodesic must be >= 1, got {n_geodesic}")
    phi_total = total_phase(traj, overlap_floor)
    g = traj.grid
    start = traj.final.amplitudes
    target = np.exp(1j * phi_total) * traj.initial.amplitudes
    t_last = float(traj.times[-1])
    dt_geo = (traj.duration if traj.duration > 0 else 1.0) / n_geodesic
    closure = []
    for j in range(1, n_geodesic + 1):
        s = j / n_geodesic
        amps = (1.0 - s) * start + s * target
        state = WaveFunction(g, amps, t_last + j * dt_geo).normalized()
        closure.append(state)
    closed = Trajectory(
        traj.states + tuple(closure),
        np.concatenate(
            [traj.times, t_last + dt_geo * np.arange(1, n_geodesic + 1)]
        ),
        None,
    )
    return aa_phase(closed, overlap_floor=overlap_floor)


@dataclass(frozen=True)
class PhaseReport:
    """All phase functionals of one trajectory.

    `aa_phase` is None when the curve is not cyclic within the tolerance used
    to build the report. `per_step_phases` holds the delta_eta increments
    whose sum is the (unwrapped) dynamic phase.
    """

    total_phase: float
    dynamic_phase: float
    aa_phase: Optional[float]
    aw_phase: float
    cyclicity_defect: float
    per_step_phases: np.ndarray


def analyze(
    traj: Trajectory,
    cyclic_tolerance: float = DEFAULT_CYCLIC_TOLERANCE,
    overlap_floor: float = DEFAULT_OVERLAP_FLOOR,
    check_hamiltonian_form: bool = True,
) -> PhaseReport:
    """Compute every phase functional of a trajectory in one pass."""
    steps = per_step_phases(traj, overlap_floor)
    if steps.size:
        worst = float(np.max(np.abs(steps)))
        if worst >= UNWRAP_SAFETY_BOUND:
            raise ResolutionError(
                f"per-step overlap phase {worst:.3f} rad exceeds the "
                f"unwrapping bound; resample the trajectory finer"
            )
    total = total_phase(traj, overlap_floor)
    dynamic = dynamic_phase(
        traj, overlap_floor, check_hamiltonian_form=check_hamiltonian_form
    )
    defect = cyclicity_defect(traj)
    aw = principal_angle(total - dynamic)
    aa: Optional[float] = aw if defect < cyclic_tolerance else None
    return PhaseReport(
        total_phase=total,
        dynamic_phase=dynamic,
        aa_phase=aa,
        aw_phase=aw,
        cyclicity_defect=defect,
        per_step_phases=steps,
    )
