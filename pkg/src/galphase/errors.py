"""Exception and warning types shared across the toolkit."""


class GalphaseError(Exception):
    """Base class for all toolkit errors."""


class GridMismatchError(GalphaseError):
    """Two states that must live on the same grid do not."""


class NormalizationError(GalphaseError):
    """A state that must be normalized is not (beyond tolerance)."""


class DomainOverflowError(GalphaseError):
    """Probability has leaked into the guard band of the periodic box."""


class NumericalBlowupError(GalphaseError):
    """Non-finite amplitudes appeared during propagation."""


class OracleSizeError(GalphaseError):
    """The dense-matrix oracle was asked for a grid it cannot afford."""


class OrthogonalStatesError(GalphaseError):
    """An overlap phase was requested between (near-)orthogonal states."""


class NotCyclicError(GalphaseError):
    """A cyclic-only phase was requested for a non-cyclic trajectory.

    Carries the cyclicity defect so callers can report *how* open the
    curve is; frame changes legitimately produce this condition.
    """

    def __init__(self, defect: float, tolerance: float):
        self.defect = float(defect)
        self.tolerance = float(tolerance)
        super().__init__(
            f"trajectory is not cyclic: defect {self.defect:.3e} "
            f"exceeds tolerance {self.tolerance:.3e}"
        )


class ResolutionError(GalphaseError):
    """Sampling is too coarse for a phase computation to be trustworthy."""


class ConfigError(GalphaseError):
    """A scenario configuration is malformed or violates an invariant."""


class QuadratureResolutionWarning(UserWarning):
    """An integrand varies too quickly between samples for quiet trapezoids."""
