"""Uniform periodic 1D grid, complex states on it, and the basic operator algebra.

Position samples are x_k = x_min + k*dx for k = 0..n_points-1, one period of a
box of length L = n_points*dx. Momentum samples are p_j = hbar*k_j with k_j
the discrete wavenumbers of the periodic box, kept in the native FFT layout
(DC first, negative frequencies in the upper half). With that pairing the
spectral transforms are unitary, translations by arbitrary non-grid-aligned
displacements are exact, and the position inner product is the plain Riemann
sum with weight dx, which on a uniform periodic grid equals the trapezoid rule.

Wave packets must never wrap around the box edge. The outer
GUARD_BAND_FRACTION of the domain on each side has to stay essentially empty
(probability below GUARD_BAND_MAX_PROBABILITY); translations check the band
before and after shifting so that support cannot alias through the periodic
boundary unnoticed.

Grid and WaveFunction are immutable; every operation returns a new value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DomainOverflowError,
    GridMismatchError,
    NormalizationError,
)

# Width of each edge guard band as a fraction of the box length, and the
# probability allowed to sit inside a band before we refuse to continue.
GUARD_BAND_FRACTION = 0.05
GUARD_BAND_MAX_PROBABILITY = 1e-8

# Norm deviation tolerated by operations that require normalized input.
NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Grid:
    """Uniform periodic spatial grid with its conjugate momentum samples.

    Parameters
    ----------
    n_points : number of samples (>= 8; powers of two make the FFTs fastest)
    x_min    : left edge of the box
    dx       : spacing (> 0); the box length is L = n_points*dx
    hbar     : value of the reduced Planck constant (momenta are p = hbar*k)
    """

    n_points: int
    x_min: float
    dx: float
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.n_points < 8:
            raise ValueError(f"n_points must be >= 8, got {self.n_points}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not math.isfinite(self.x_min):
            raise ValueError("x_min must be finite")

    @property
    def length(self) -> float:
        return self.n_points * self.dx

    @property
    def dp(self) -> float:
        """Momentum-space measure: spacing of the p samples."""
        return 2.0 * math.pi * self.hbar / self.length

    @cached_property
    def x(self) -> np.ndarray:
        xs = self.x_min + self.dx * np.arange(self.n_points)
        xs.flags.writeable = False
        return xs

    @cached_property
    def k(self) -> np.ndarray:
        ks = 2.0 * math.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        ks.flags.writeable = False
        return ks

    @cached_property
    def p(self) -> np.ndarray:
        ps = self.hbar * self.k
        ps.flags.writeable = False
        return ps


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes on a Grid at a time tag (units: length^(-1/2))."""

    grid: Grid
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.shape != (self.grid.n_points,):
            raise ValueError(
                f"amplitude shape {amps.shape} does not match grid "
                f"({self.grid.n_points},)"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return math.sqrt(self.grid.dx * float(np.sum(np.abs(self.amplitudes) ** 2)))

    def normalized(self) -> "WaveFunction":
        n = self.norm()
        if n == 0.0:
            raise NormalizationError("cannot normalize the zero state")
        return WaveFunction(self.grid, self.amplitudes / n, self.time)

    def at_time(self, time: float) -> "WaveFunction":
        """Same amplitudes with a new time tag."""
        return WaveFunction(self.grid, self.amplitudes, time)


def _require_same_grid(a: WaveFunction, b: WaveFunction) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(
            f"states live on different grids: {a.grid} vs {b.grid}"
        )


def _require_normalized(psi: WaveFunction, what: str) -> None:
    n = psi.norm()
    if abs(n - 1.0) > NORM_TOLERANCE:
        raise NormalizationError(
            f"{what} requires a normalized state (norm = {n:.9f})"
        )


def inner_product(a: WaveFunction, b: WaveFunction) -> complex:
    """Discrete inner product <a|b> = dx * sum(conj(a_k) b_k).

    Conjugate-symmetric: inner_product(a, b) == conj(inner_product(b, a)).
    """
    _require_same_grid(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.grid.dx)


def l2_distance(a: WaveFunction, b: WaveFunction) -> float:
    """Plain L2 distance sqrt(dx * sum |a_k - b_k|^2), global phase included."""
    _require_same_grid(a, b)
    return math.sqrt(
        a.grid.dx * float(np.sum(np.abs(a.amplitudes - b.amplitudes) ** 2))
    )


def to_momentum(psi: WaveFunction) -> np.ndarray:
    """Momentum-space amplitudes phi_j, ordered like grid.p.

    Normalized so that sum |phi_j|^2 * grid.dp equals the position-space
    squared norm (unitary transform); phi_j samples the continuum transform
    (2 pi hbar)^(-1/2) integral psi(x) exp(-i p x / hbar) dx.
    """
    g = psi.grid
    scale = g.dx / math.sqrt(2.0 * math.pi * g.hbar)
    return scale * np.exp(-1j * g.k * g.x_min) * np.fft.fft(psi.amplitudes)


def from_momentum(grid: Grid, phi: np.ndarray, time: float = 0.0) -> WaveFunction:
    """Inverse of to_momentum."""
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (grid.n_points,):
        raise ValueError(
            f"momentum amplitude shape {phi.shape} does not match grid"
        )
    scale = math.sqrt(2.0 * math.pi * grid.hbar) / grid.dx
    amps = np.fft.ifft(phi * np.exp(1j * grid.k * grid.x_min)) * scale
    return WaveFunction(grid, amps, time)


def expect_q(psi: WaveFunction) -> float:
    """Position expectation dx * sum x_k |psi_k|^2 (requires normalized input)."""
    _require_normalized(psi, "expect_q")
    g = psi.grid
    return float(g.dx * np.sum(g.x * np.abs(psi.amplitudes) ** 2))


def expect_p(psi: WaveFunction) -> float:
    """Canonical momentum expectation, evaluated in momentum space."""
    _require_normalized(psi, "expect_p")
    g = psi.grid
    phi = to_momentum(psi)
    return float(g.dp * np.sum(g.p * np.abs(phi) ** 2))


def guard_band_probability(psi: WaveFunction) -> float:
    """Probability sitting in the outer guard bands of the box."""
    n_band = int(GUARD_BAND_FRACTION * psi.grid.n_points)
    if n_band == 0:
        return 0.0
    density = np.abs(psi.amplitudes) ** 2
    return float(psi.grid.dx * (np.sum(density[:n_band]) + np.sum(density[-n_band:])))


def check_guard_band(psi: WaveFunction, context: str = "state") -> None:
    """Raise DomainOverflowError if the guard bands are not essentially empty."""
    prob = guard_band_probability(psi)
    if prob > GUARD_BAND_MAX_PROBABILITY:
        raise DomainOverflowError(
            f"{context}: probability {prob:.3e} in the guard bands exceeds "
            f"{GUARD_BAND_MAX_PROBABILITY:.1e}; the box is too small for this "
            f"state or displacement"
        )


def translate(psi: WaveFunction, displacement: float) -> WaveFunction:
    """Shift a state: the result samples psi(x + a) for a = displacement.

    Realized by multiplying the momentum components with exp(i k a), which is
    exact for arbitrary non-grid-aligned a and unitary. A packet centered at
    x0 ends up centered at x0 - a. The guard bands are checked before and
    after the shift.
    """
    if displacement == 0.0:
        return psi
    if not math.isfinite(displacement):
        raise ValueError("displacement must be finite")
    check_guard_band(psi, "translate input")
    g = psi.grid
    shifted = np.fft.ifft(np.fft.fft(psi.amplitudes) * np.exp(1j * g.k * displacement))
    out = WaveFunction(g, shifted, psi.time)
    check_guard_band(out, "translate output")
    return out
