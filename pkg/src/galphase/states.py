"""Wave-packet factories used by the scenario suite."""

from __future__ import annotations

import math

import numpy as np

from .grid import Grid, WaveFunction


def gaussian_packet(
    grid: Grid,
    center: float,
    width: float,
    momentum: float = 0.0,
    time: float = 0.0,
) -> WaveFunction:
    """Normalized Gaussian exp(-(x-c)^2/(2 w^2)) * exp(i p0 (x-c)/hbar).

    `width` is the amplitude 1/e half-width w; the position variance is
    w^2/2 and the momentum variance hbar^2/(2 w^2) (minimum uncertainty).
    """
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    x = grid.x
    amps = np.exp(
        -((x - center) ** 2) / (2.0 * width**2)
        + 1j * momentum * (x - center) / grid.hbar
    )
    return WaveFunction(grid, amps, time).normalized()


def nearest_grid_momentum(grid: Grid, momentum: float) -> float:
    """The grid momentum sample closest to `momentum`."""
    idx = int(np.argmin(np.abs(grid.p - momentum)))
    return float(grid.p[idx])


def plane_wave(grid: Grid, momentum: float, time: float = 0.0) -> WaveFunction:
    """Normalized plane wave at the grid momentum closest to `momentum`.

    Exact eigenstate of the discrete momentum operator, so spectral kinetic
    steps and translations act on it without any discretization error.
    """
    p0 = nearest_grid_momentum(grid, momentum)
    amps = np.exp(1j * p0 * grid.x / grid.hbar) / math.sqrt(grid.length)
    return WaveFunction(grid, amps, time)


def coherent_state(
    grid: Grid,
    alpha: complex,
    omega: float,
    mass: float = 1.0,
    time: float = 0.0,
) -> WaveFunction:
    """Harmonic-oscillator coherent state |alpha> as a Gaussian packet.

    Ground-state width sigma = sqrt(hbar/(m omega)), displaced to
    <x> = sqrt(2 hbar/(m omega)) Re(alpha) and <p> = sqrt(2 hbar m omega)
    Im(alpha). Under H = p^2/2m + m omega^2 x^2 / 2 it evolves with
    alpha(t) = alpha exp(-i omega t) times the global factor
    exp(-i omega t / 2).
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass}")
    alpha = complex(alpha)
    sigma = math.sqrt(grid.hbar / (mass * omega))
    center = math.sqrt(2.0 * grid.hbar / (mass * omega)) * alpha.real
    momentum = math.sqrt(2.0 * grid.hbar * mass * omega) * alpha.imag
    return gaussian_packet(grid, center, sigma, momentum, time)
