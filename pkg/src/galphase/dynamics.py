"""Trajectory generation: split-step propagation and a dense-matrix oracle.

The Hamiltonian family is H = (P - A(t))^2 / (2 m) + V(Q, t) with a spatially
uniform vector potential A(t). Keeping A uniform means the kinetic factor
stays diagonal in momentum space, so the Strang splitting below is exact in
its kinetic half; in one dimension a uniform A carries no magnetic field and
is pure gauge, so no physics is lost.

The propagator is second-order Strang splitting: a half-step potential phase,
a full kinetic step in momentum space, and another half-step potential phase.
Both potential factors are evaluated at the midpoint time of the step, as is
A, which is the standard second-order choice for time-dependent generators
(midpoint Magnus rule combined with symmetric splitting).

Trajectories are immutable time-ordered sequences of WaveFunctions. Sampling
cadence (`sample_every`) only controls which intermediate states are stored;
integration always runs at the full step resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    NormalizationError,
    NumericalBlowupError,
    OracleSizeError,
)
from .grid import (
    Grid,
    WaveFunction,
    check_guard_band,
    to_momentum,
    _require_normalized,
)

# Largest grid the dense eigendecomposition oracle will accept.
DENSE_ORACLE_MAX_POINTS = 128

# Trajectory states may drift from unit norm by at most this much.
TRAJECTORY_NORM_TOLERANCE = 1e-8


def _as_time_function(value) -> Callable[[float], float]:
    if callable(value):
        return value
    const = float(value)
    return lambda t: const


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """H = (P - A(t))^2 / (2 m) + V(Q, t) with spatially uniform A.

    `potential` maps (x_array, t) to the potential samples; `vector_potential`
    maps t to the uniform A value (momentum units).
    """

    mass: float
    hbar: float
    potential: Callable[[np.ndarray, float], np.ndarray]
    vector_potential: Callable[[float], float]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


def free_particle(
    mass: float = 1.0, hbar: float = 1.0, vector_potential=0.0
) -> HamiltonianSpec:
    """V = 0, optionally with a uniform vector potential A(t)."""
    return HamiltonianSpec(
        mass=mass,
        hbar=hbar,
        potential=lambda x, t: np.zeros_like(x),
        vector_potential=_as_time_function(vector_potential),
        label="free",
    )


def harmonic_oscillator(
    omega: float, mass: float = 1.0, hbar: float = 1.0, vector_potential=0.0
) -> HamiltonianSpec:
    """V = m omega^2 x^2 / 2."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    return HamiltonianSpec(
        mass=mass,
        hbar=hbar,
        potential=lambda x, t: 0.5 * mass * omega**2 * x**2,
        vector_potential=_as_time_function(vector_potential),
        label=f"harmonic(omega={omega:g})",
    )


def polynomial_potential(
    coefficients: Sequence[float],
    mass: float = 1.0,
    hbar: float = 1.0,
    vector_potential=0.0,
) -> HamiltonianSpec:
    """V = sum_i coefficients[i] * x^i."""
    coeffs = np.asarray(coefficients, dtype=float)
    return HamiltonianSpec(
        mass=mass,
        hbar=hbar,
        potential=lambda x, t: np.polynomial.polynomial.polyval(x, coeffs),
        vector_potential=_as_time_function(vector_potential),
        label=f"polynomial({list(coeffs)})",
    )


def expect_energy(
    psi: WaveFunction, hamiltonian: HamiltonianSpec, time: Optional[float] = None
) -> float:
    """<H> = <(P - A(t))^2>/(2 m) + <V(Q, t)> for a normalized state."""
    _require_normalized(psi, "expect_energy")
    t = psi.time if time is None else time
    g = psi.grid
    a = hamiltonian.vector_potential(t)
    phi = to_momentum(psi)
    kinetic = g.dp * float(
        np.sum((g.p - a) ** 2 * np.abs(phi) ** 2)
    ) / (2.0 * hamiltonian.mass)
    v = np.asarray(hamiltonian.potential(g.x, t), dtype=float)
    potential = g.dx * float(np.sum(v * np.abs(psi.amplitudes) ** 2))
    return kinetic + potential


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-ordered states psi(t_k) over [t_0, t_N], optionally with their H.

    `hamiltonian` is None for synthetic curves (boosted, gauged, warped or
    hand-built trajectories); phase functionals that cross-check against <H>
    skip the check in that case.
    """

    states: tuple[WaveFunction, ...]
    times: np.ndarray
    hamiltonian: Optional[HamiltonianSpec] = None

    def __post_init__(self) -> None:
        states = tuple(self.states)
        times = np.array(self.times, dtype=float, copy=True)
        if len(states) == 0:
            raise ValueError("a trajectory needs at least one state")
        if times.shape != (len(states),):
            raise ValueError("times and states must have matching lengths")
        grid = states[0].grid
        for s in states:
            if s.grid != grid:
                raise ValueError("all trajectory states must share one grid")
        if len(times) > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("trajectory times must be strictly increasing")
        for s, t in zip(states, times):
            if abs(s.norm() - 1.0) > TRAJECTORY_NORM_TOLERANCE:
                raise NormalizationError(
                    f"trajectory state at t={t:g} has norm {s.norm():.12f}"
                )
        times.flags.writeable = False
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, idx: int) -> WaveFunction:
        return self.states[idx]

    @property
    def grid(self) -> Grid:
        return self.states[0].grid

    @property
    def initial(self) -> WaveFunction:
        return self.states[0]

    @property
    def final(self) -> WaveFunction:
        return self.states[-1]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    def expect_q_series(self) -> np.ndarray:
        from .grid import expect_q

        return np.array([expect_q(s) for s in self.states])

    def expect_p_series(self) -> np.ndarray:
        from .grid import expect_p

        return np.array([expect_p(s) for s in self.states])

    def without_hamiltonian(self) -> "Trajectory":
        return Trajectory(self.states, self.times, None)


def evolve(
    psi0: WaveFunction,
    hamiltonian: HamiltonianSpec,
    duration: float,
    n_steps: int,
    sample_every: int = 1,
) -> Trajectory:
    """Integrate the Schroedinger equation with second-order Strang splitting.

    Returns the trajectory sampled every `sample_every` steps, always
    including psi0 at t_0 and the final state at t_0 + duration
    (`n_steps` must be divisible by `sample_every`). Norm is conserved to
    rounding because every factor is a pure phase; sampled states are checked
    for guard-band overflow and non-finite amplitudes.
    """
    if hamiltonian.hbar != psi0.grid.hbar:
        raise ValueError(
            f"hbar mismatch: grid has {psi0.grid.hbar}, "
            f"hamiltonian has {hamiltonian.hbar}"
        )
    _require_normalized(psi0, "evolve")
    if duration == 0.0:
        return Trajectory((psi0,), np.array([psi0.time]), hamiltonian)
    if not duration > 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if sample_every < 1 or n_steps % sample_every != 0:
        raise ValueError(
            f"sample_every ({sample_every}) must divide n_steps ({n_steps})"
        )

    g = psi0.grid
    x, p = g.x, g.p
    hbar, mass = g.hbar, hamiltonian.mass
    dt = duration / n_steps
    t0 = psi0.time

    check_guard_band(psi0, "evolve initial state")
    amps = np.array(psi0.amplitudes, dtype=np.complex128)
    states = [psi0]
    times = [t0]
    for step in range(n_steps):
        t_mid = t0 + (step + 0.5) * dt
        v = np.asarray(hamiltonian.potential(x, t_mid), dtype=float)
        a = hamiltonian.vector_potential(t_mid)
        half_kick = np.exp(-0.5j * dt / hbar * v)
        kinetic = np.exp(-0.5j * dt / (mass * hbar) * (p - a) ** 2)
        amps = half_kick * amps
        amps = np.fft.ifft(kinetic * np.fft.fft(amps))
        amps = half_kick * amps
        if (step + 1) % sample_every == 0:
            t = t0 + (step + 1) * dt
            if not np.all(np.isfinite(amps.view(np.float64))):
                raise NumericalBlowupError(
                    f"non-finite amplitudes at t={t:g} (step {step + 1})"
                )
            state = WaveFunction(g, amps, t)
            check_guard_band(state, f"evolve at t={t:g}")
            states.append(state)
            times.append(t)
    return Trajectory(tuple(states), np.array(times), hamiltonian)


def _check_time_independent(
    hamiltonian: HamiltonianSpec, grid: Grid, duration: float
) -> None:
    t_probe = 0.5 * duration if duration > 0 else 1.0
    v0 = np.asarray(hamiltonian.potential(grid.x, 0.0), dtype=float)
    v1 = np.asarray(hamiltonian.potential(grid.x, t_probe), dtype=float)
    scale = 1.0 + float(np.max(np.abs(v0)))
    if float(np.max(np.abs(v1 - v0))) > 1e-12 * scale:
        raise ValueError("dense oracle requires a time-independent potential")
    a0 = hamiltonian.vector_potential(0.0)
    a1 = hamiltonian.vector_potential(t_probe)
    if abs(a1 - a0) > 1e-12 * (1.0 + abs(a0)):
        raise ValueError("dense oracle requires a time-independent vector potential")


def dense_hamiltonian_matrix(
    grid: Grid, hamiltonian: HamiltonianSpec
) -> np.ndarray:
    """Dense n x n matrix of H at t=0: spectral kinetic part plus diagonal V."""
    n = grid.n_points
    a0 = hamiltonian.vector_potential(0.0)
    kin = (grid.p - a0) ** 2 / (2.0 * hamiltonian.mass)
    fwd = np.fft.fft(np.eye(n), axis=0)
    inv = np.fft.ifft(np.eye(n), axis=0)
    h = inv @ (kin[:, None] * fwd)
    h += np.diag(np.asarray(hamiltonian.potential(grid.x, 0.0), dtype=float))
    return 0.5 * (h + h.conj().T)


def evolve_dense_oracle(
    psi0: WaveFunction,
    hamiltonian: HamiltonianSpec,
    duration: float,
    n_samples: int = 2,
) -> Trajectory:
    """Exact propagation exp(-i H t / hbar) via dense eigendecomposition.

    Independent of the split-step path: builds the full Hamiltonian matrix
    (kinetic part by spectral conjugation, potential on the diagonal),
    diagonalizes it once, and evaluates the propagator exactly at
    `n_samples` equally spaced times including both endpoints. Limited to
    small time-independent problems; used to certify the split-step kernel.
    """
    g = psi0.grid
    if g.n_points > DENSE_ORACLE_MAX_POINTS:
        raise OracleSizeError(
            f"dense oracle supports at most {DENSE_ORACLE_MAX_POINTS} points, "
            f"got {g.n_points}"
        )
    if hamiltonian.hbar != g.hbar:
        raise ValueError("hbar mismatch between grid and hamiltonian")
    _require_normalized(psi0, "evolve_dense_oracle")
    _check_time_independent(hamiltonian, g, duration)
    if duration == 0.0:
        return Trajectory((psi0,), np.array([psi0.time]), hamiltonian)
    if not duration > 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2 for a nonzero duration")

    h = dense_hamiltonian_matrix(g, hamiltonian)
    energies, modes = scipy.linalg.eigh(h)
    coeff = modes.conj().T @ psi0.amplitudes
    t0 = psi0.time
    offsets = np.linspace(0.0, duration, n_samples)
    states = []
    for dt in offsets:
        amps = modes @ (np.exp(-1j * energies * dt / g.hbar) * coeff)
        states.append(WaveFunction(g, amps, t0 + dt))
    return Trajectory(tuple(states), t0 + offsets, hamiltonian)


def gauge_transform(
    traj: Trajectory, phase_function: Callable[[np.ndarray, float], np.ndarray]
) -> Trajectory:
    """Multiply each sample by exp(i f(x, t)): a local (gauge) phase change.

    The result is synthetic (no Hamiltonian reference): the original H no
    longer generates the transformed curve unless f is trivial.
    """
    x = traj.grid.x
    states = []
    for s, t in zip(traj.states, traj.times):
        f = np.asarray(phase_function(x, float(t)), dtype=float)
        if not np.all(np.isfinite(f)):
            raise ValueError(f"gauge phase is not finite at t={t:g}")
        states.append(WaveFunction(s.grid, np.exp(1j * f) * s.amplitudes, s.time))
    return Trajectory(tuple(states), traj.times, None)


def time_warp(traj: Trajectory, warp: Callable[[float], float]) -> Trajectory:
    """Relabel sample times through a strictly monotone warp; states unchanged."""
    new_times = np.array([warp(float(t)) for t in traj.times])
    if len(new_times) > 1 and not np.all(np.diff(new_times) > 0):
        raise ValueError("time warp must be strictly increasing")
    states = tuple(
        s.at_time(float(t)) for s, t in zip(traj.states, new_times)
    )
    return Trajectory(states, new_times, None)


def phase_lift(traj: Trajectory, phases: Sequence[float]) -> Trajectory:
    """Multiply sample k by exp(i phases[k]): a new lift of the same ray curve."""
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (len(traj),):
        raise ValueError(
            f"need one phase per sample: got {phases.shape}, "
            f"trajectory has {len(traj)}"
        )
    states = tuple(
        WaveFunction(s.grid, np.exp(1j * chi) * s.amplitudes, s.time)
        for s, chi in zip(traj.states, phases)
    )
    return Trajectory(states, traj.times, None)
