"""Geometric phases of simulated 1D quantum trajectories under Galilean boosts.

The toolkit evolves wave packets on a uniform periodic grid (split-step
spectral propagation), computes total, dynamic, and geometric phases of the
resulting trajectories, applies passive Galilean boosts, and verifies the
transformation law relating the geometric phase in the two frames, which in
particular demonstrates that the phase is not Galilean invariant.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainOverflowError,
    GalphaseError,
    GridMismatchError,
    NormalizationError,
    NotCyclicError,
    NumericalBlowupError,
    OracleSizeError,
    OrthogonalStatesError,
    QuadratureResolutionWarning,
    ResolutionError,
)
from .grid import (
    GUARD_BAND_FRACTION,
    GUARD_BAND_MAX_PROBABILITY,
    Grid,
    WaveFunction,
    check_guard_band,
    expect_p,
    expect_q,
    from_momentum,
    guard_band_probability,
    inner_product,
    l2_distance,
    to_momentum,
    translate,
)
from .states import (
    coherent_state,
    gaussian_packet,
    nearest_grid_momentum,
    plane_wave,
)
from .dynamics import (
    HamiltonianSpec,
    Trajectory,
    evolve,
    evolve_dense_oracle,
    expect_energy,
    free_particle,
    gauge_transform,
    harmonic_oscillator,
    phase_lift,
    polynomial_potential,
    time_warp,
)
from .phases import (
    DEFAULT_CYCLIC_TOLERANCE,
    DEFAULT_OVERLAP_FLOOR,
    PhaseReport,
    aa_phase,
    analyze,
    aw_phase,
    cyclicity_defect,
    dynamic_phase,
    geodesic_closure_phase,
    local_phase_change,
    per_step_phases,
    principal_angle,
    total_phase,
)
from .boost import (
    BoostParams,
    apply_boost,
    boost_trajectory,
    check_operator_transforms,
)
from .invariance import (
    CyclicCaseResult,
    EhrenfestResult,
    GaugeSplitResult,
    TransformationReport,
    ehrenfest_decomposition,
    endpoint_overlap_factor,
    momentum_integral,
    predicted_boost_factor,
    vector_potential_integral,
    verify_cyclic_special_case,
    verify_gauge_split_law,
    verify_transformation_law,
)
from .config import (
    DEFAULT_TOLERANCES,
    VALID_CHECKS,
    ScenarioConfig,
    load_scenario,
    parse_scenario,
)
from .runner import CheckResult, RunReport, run_scenario
from .report import emit_report

__all__ = [
    "__version__",
    # errors
    "GalphaseError",
    "GridMismatchError",
    "NormalizationError",
    "DomainOverflowError",
    "NumericalBlowupError",
    "OracleSizeError",
    "OrthogonalStatesError",
    "NotCyclicError",
    "ResolutionError",
    "ConfigError",
    "QuadratureResolutionWarning",
    # grid and states
    "Grid",
    "WaveFunction",
    "GUARD_BAND_FRACTION",
    "GUARD_BAND_MAX_PROBABILITY",
    "inner_product",
    "l2_distance",
    "to_momentum",
    "from_momentum",
    "expect_q",
    "expect_p",
    "translate",
    "guard_band_probability",
    "check_guard_band",
    "gaussian_packet",
    "plane_wave",
    "coherent_state",
    "nearest_grid_momentum",
    # dynamics
    "HamiltonianSpec",
    "Trajectory",
    "evolve",
    "evolve_dense_oracle",
    "expect_energy",
    "free_particle",
    "harmonic_oscillator",
    "polynomial_potential",
    "gauge_transform",
    "time_warp",
    "phase_lift",
    # phases
    "PhaseReport",
    "DEFAULT_CYCLIC_TOLERANCE",
    "DEFAULT_OVERLAP_FLOOR",
    "local_phase_change",
    "per_step_phases",
    "dynamic_phase",
    "total_phase",
    "cyclicity_defect",
    "aa_phase",
    "aw_phase",
    "geodesic_closure_phase",
    "analyze",
    "principal_angle",
    # boost
    "BoostParams",
    "apply_boost",
    "boost_trajectory",
    "check_operator_transforms",
    # invariance
    "TransformationReport",
    "EhrenfestResult",
    "GaugeSplitResult",
    "CyclicCaseResult",
    "endpoint_overlap_factor",
    "momentum_integral",
    "vector_potential_integral",
    "predicted_boost_factor",
    "verify_transformation_law",
    "verify_gauge_split_law",
    "verify_cyclic_special_case",
    "ehrenfest_decomposition",
    # config / runner / report
    "ScenarioConfig",
    "DEFAULT_TOLERANCES",
    "VALID_CHECKS",
    "load_scenario",
    "parse_scenario",
    "CheckResult",
    "RunReport",
    "run_scenario",
    "emit_report",
]
