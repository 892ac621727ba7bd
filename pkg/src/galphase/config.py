"""Declarative scenario configuration: parsing, validation, defaults.

Scenario files are YAML. Flags on the command line only select paths, output
formats, verbosity, and parallelism; everything physical lives in the config
so scenarios stay versionable. See scenarios/annotated_example.cfg for a
commented walkthrough of every field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError, DomainOverflowError
from .grid import GUARD_BAND_FRACTION

VALID_CHECKS = (
    "operator_transforms",
    "ehrenfest",
    "eq8",
    "eq10",
    "eq11",
    "geodesic_closure",
    "reparametrization",
    "gauge_sensitivity",
)

DEFAULT_TOLERANCES: dict[str, float] = {
    # phase-law residuals (moduli of unit-factor differences)
    "eq8": 1e-6,
    "eq10": 1e-5,
    "eq11": 1e-5,
    "endpoint_q_factor": 1e-6,
    "displacement_factor": 1e-10,
    # non-invariance gap thresholds
    "gap_min": 1e-2,
    "gap_zero": 1e-12,
    # expectation identities
    "operator_q": 1e-10,
    "operator_p": 1e-8,
    "ehrenfest": 1e-4,
    # geometric-phase properties
    "geodesic_closure": 1e-6,
    "reparametrization": 1e-9,
    "phase_lift": 1e-9,
    "gauge_change_min": 1e-2,
    # shared numerical policy
    "cyclic_tolerance": 1e-4,
    "overlap_floor": 1e-6,
}

# Gauge used by the gauge_sensitivity check: f(x, t) = lambda * x * t / T.
# The time factor matters; a time-independent pointwise phase is a fixed
# unitary of the whole curve and provably cannot change any overlap.
GAUGE_SENSITIVITY_LAMBDA = 0.3


def _require_mapping(node, name: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(f"'{name}' must be a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, allowed: set[str], name: str) -> None:
    unknown = set(node) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in '{name}': {sorted(unknown)}; allowed: {sorted(allowed)}"
        )


def _get_number(node: dict, key: str, name: str, default=None) -> float:
    if key not in node:
        if default is None:
            raise ConfigError(f"'{name}.{key}' is required")
        return float(default)
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{name}.{key}' must be a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ConfigError(f"'{name}.{key}' must be finite")
    return float(value)


def _get_int(node: dict, key: str, name: str, default=None) -> int:
    value = _get_number(node, key, name, default)
    if value != int(value):
        raise ConfigError(f"'{name}.{key}' must be an integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class GridConfig:
    n_points: int
    x_min: float
    dx: float

    @property
    def length(self) -> float:
        return self.n_points * self.dx


@dataclass(frozen=True)
class UnitsConfig:
    hbar: float = 1.0
    mass: float = 1.0


@dataclass(frozen=True)
class PotentialConfig:
    kind: str  # free | harmonic | polynomial
    omega: Optional[float] = None
    coefficients: Optional[tuple[float, ...]] = None


@dataclass(frozen=True)
class VectorPotentialConfig:
    kind: str  # zero | constant
    value: float = 0.0


@dataclass(frozen=True)
class InitialStateConfig:
    kind: str  # gaussian | coherent
    center: float = 0.0
    width: float = 1.0
    momentum: float = 0.0
    alpha: complex = 0.0
    omega: float = 1.0


@dataclass(frozen=True)
class EvolutionConfig:
    duration: float
    n_steps: int
    sample_every: int = 1


@dataclass(frozen=True)
class ScenarioConfig:
    label: str
    grid: GridConfig
    units: UnitsConfig
    potential: PotentialConfig
    vector_potential: VectorPotentialConfig
    initial_state: InitialStateConfig
    evolution: EvolutionConfig
    boosts: tuple[float, ...] = ()
    checks: tuple[str, ...] = ()
    tolerances: dict[str, float] = field(default_factory=dict)

    def tolerance(self, key: str) -> float:
        if key not in DEFAULT_TOLERANCES:
            raise KeyError(f"unknown tolerance '{key}'")
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def effective_dict(self) -> dict:
        """Every effective parameter, defaults included, for the report echo."""
        alpha = self.initial_state.alpha
        return {
            "label": self.label,
            "grid": {
                "n_points": self.grid.n_points,
                "x_min": self.grid.x_min,
                "dx": self.grid.dx,
            },
            "units": {"hbar": self.units.hbar, "mass": self.units.mass},
            "system": {
                "potential": {
                    "kind": self.potential.kind,
                    **(
                        {"omega": self.potential.omega}
                        if self.potential.omega is not None
                        else {}
                    ),
                    **(
                        {"coefficients": list(self.potential.coefficients)}
                        if self.potential.coefficients is not None
                        else {}
                    ),
                },
                "vector_potential": {
                    "kind": self.vector_potential.kind,
                    "value": self.vector_potential.value,
                },
            },
            "initial_state": (
                {
                    "kind": "gaussian",
                    "center": self.initial_state.center,
                    "width": self.initial_state.width,
                    "momentum": self.initial_state.momentum,
                }
                if self.initial_state.kind == "gaussian"
                else {
                    "kind": "coherent",
                    "alpha": (
                        alpha.real if alpha.imag == 0 else [alpha.real, alpha.imag]
                    ),
                    "omega": self.initial_state.omega,
                }
            ),
            "evolution": {
                "duration": self.evolution.duration,
                "n_steps": self.evolution.n_steps,
                "sample_every": self.evolution.sample_every,
            },
            "boosts": list(self.boosts),
            "checks": list(self.checks),
            "tolerances": {
                key: self.tolerance(key) for key in sorted(DEFAULT_TOLERANCES)
            },
        }


def _parse_grid(node) -> GridConfig:
    node = _require_mapping(node, "grid")
    _check_keys(node, {"n_points", "x_min", "dx"}, "grid")
    cfg = GridConfig(
        n_points=_get_int(node, "n_points", "grid"),
        x_min=_get_number(node, "x_min", "grid"),
        dx=_get_number(node, "dx", "grid"),
    )
    if cfg.n_points < 8:
        raise ConfigError(f"grid.n_points must be >= 8, got {cfg.n_points}")
    if cfg.dx <= 0:
        raise ConfigError(f"grid.dx must be positive, got {cfg.dx}")
    return cfg


def _parse_units(node) -> UnitsConfig:
    if node is None:
        return UnitsConfig()
    node = _require_mapping(node, "units")
    _check_keys(node, {"hbar", "mass"}, "units")
    cfg = UnitsConfig(
        hbar=_get_number(node, "hbar", "units", 1.0),
        mass=_get_number(node, "mass", "units", 1.0),
    )
    if cfg.hbar <= 0 or cfg.mass <= 0:
        raise ConfigError("units.hbar and units.mass must be positive")
    return cfg


def _parse_potential(node) -> PotentialConfig:
    if node is None:
        return PotentialConfig(kind="free")
    node = _require_mapping(node, "system.potential")
    _check_keys(node, {"kind", "omega", "coefficients"}, "system.potential")
    kind = node.get("kind")
    if kind == "free":
        return PotentialConfig(kind="free")
    if kind == "harmonic":
        omega = _get_number(node, "omega", "system.potential")
        if omega <= 0:
            raise ConfigError("system.potential.omega must be positive")
        return PotentialConfig(kind="harmonic", omega=omega)
    if kind == "polynomial":
        coeffs = node.get("coefficients")
        if not isinstance(coeffs, list) or not coeffs:
            raise ConfigError("system.potential.coefficients must be a nonempty list")
        try:
            coeffs = tuple(float(c) for c in coeffs)
        except (TypeError, ValueError) as exc:
            raise ConfigError("system.potential.coefficients must be numbers") from exc
        return PotentialConfig(kind="polynomial", coefficients=coeffs)
    raise ConfigError(
        f"system.potential.kind must be free|harmonic|polynomial, got {kind!r}"
    )


def _parse_vector_potential(node) -> VectorPotentialConfig:
    if node is None:
        return VectorPotentialConfig(kind="zero")
    node = _require_mapping(node, "system.vector_potential")
    _check_keys(node, {"kind", "value"}, "system.vector_potential")
    kind = node.get("kind")
    if kind == "zero":
        return VectorPotentialConfig(kind="zero", value=0.0)
    if kind == "constant":
        return VectorPotentialConfig(
            kind="constant",
            value=_get_number(node, "value", "system.vector_potential"),
        )
    raise ConfigError(
        f"system.vector_potential.kind must be zero|constant, got {kind!r}"
    )


def _parse_initial_state(node) -> InitialStateConfig:
    node = _require_mapping(node, "initial_state")
    kind = node.get("kind")
    if kind == "gaussian":
        _check_keys(node, {"kind", "center", "width", "momentum"}, "initial_state")
        width = _get_number(node, "width", "initial_state")
        if width <= 0:
            raise ConfigError("initial_state.width must be positive")
        return InitialStateConfig(
            kind="gaussian",
            center=_get_number(node, "center", "initial_state", 0.0),
            width=width,
            momentum=_get_number(node, "momentum", "initial_state", 0.0),
        )
    if kind == "coherent":
        _check_keys(node, {"kind", "alpha", "omega"}, "initial_state")
        raw = node.get("alpha")
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            alpha = complex(float(raw), 0.0)
        elif (
            isinstance(raw, list)
            and len(raw) == 2
            and all(isinstance(c, (int, float)) for c in raw)
        ):
            alpha = complex(float(raw[0]), float(raw[1]))
        else:
            raise ConfigError(
                "initial_state.alpha must be a number or a [re, im] pair"
            )
        omega = _get_number(node, "omega", "initial_state")
        if omega <= 0:
            raise ConfigError("initial_state.omega must be positive")
        return InitialStateConfig(kind="coherent", alpha=alpha, omega=omega)
    raise ConfigError(f"initial_state.kind must be gaussian|coherent, got {kind!r}")


def _parse_evolution(node) -> EvolutionConfig:
    node = _require_mapping(node, "evolution")
    _check_keys(node, {"duration", "n_steps", "sample_every"}, "evolution")
    cfg = EvolutionConfig(
        duration=_get_number(node, "duration", "evolution"),
        n_steps=_get_int(node, "n_steps", "evolution"),
        sample_every=_get_int(node, "sample_every", "evolution", 1),
    )
    if cfg.duration < 0:
        raise ConfigError("evolution.duration must be >= 0")
    if cfg.n_steps < 1:
        raise ConfigError("evolution.n_steps must be >= 1")
    if cfg.sample_every < 1 or cfg.n_steps % cfg.sample_every != 0:
        raise ConfigError("evolution.sample_every must divide evolution.n_steps")
    return cfg


def parse_scenario(data: dict, label_fallback: str = "scenario") -> ScenarioConfig:
    data = _require_mapping(data, "scenario")
    _check_keys(
        data,
        {
            "label",
            "grid",
            "units",
            "system",
            "initial_state",
            "evolution",
            "boosts",
            "checks",
            "tolerances",
        },
        "scenario",
    )
    label = data.get("label", label_fallback)
    if not isinstance(label, str) or not label:
        raise ConfigError("label must be a nonempty string")

    system = data.get("system")
    if system is None:
        potential = PotentialConfig(kind="free")
        vector = VectorPotentialConfig(kind="zero")
    else:
        system = _require_mapping(system, "system")
        _check_keys(system, {"potential", "vector_potential"}, "system")
        potential = _parse_potential(system.get("potential"))
        vector = _parse_vector_potential(system.get("vector_potential"))

    boosts_node = data.get("boosts", [])
    if not isinstance(boosts_node, list):
        raise ConfigError("boosts must be a list of velocities")
    boosts = []
    for v in boosts_node:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"boost velocity must be a number, got {v!r}")
        if not math.isfinite(float(v)):
            raise ConfigError("boost velocities must be finite")
        boosts.append(float(v))

    checks_node = data.get("checks", [])
    if not isinstance(checks_node, list):
        raise ConfigError("checks must be a list of check names")
    for name in checks_node:
        if name not in VALID_CHECKS:
            raise ConfigError(
                f"unknown check {name!r}; valid checks: {list(VALID_CHECKS)}"
            )
    if len(set(checks_node)) != len(checks_node):
        raise ConfigError("checks must not repeat")

    tol_node = data.get("tolerances", {}) or {}
    tol_node = _require_mapping(tol_node, "tolerances")
    _check_keys(tol_node, set(DEFAULT_TOLERANCES), "tolerances")
    tolerances = {}
    for key, value in tol_node.items():
        tolerances[key] = _get_number(tol_node, key, "tolerances")

    cfg = ScenarioConfig(
        label=label,
        grid=_parse_grid(data.get("grid")),
        units=_parse_units(data.get("units")),
        potential=potential,
        vector_potential=vector,
        initial_state=_parse_initial_state(data.get("initial_state")),
        evolution=_parse_evolution(data.get("evolution")),
        boosts=tuple(boosts),
        checks=tuple(checks_node),
        tolerances=tolerances,
    )
    validate_feasibility(cfg)
    return cfg


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Parse and validate a scenario file (YAML)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must contain a YAML mapping")
    return parse_scenario(data, label_fallback=path.stem)


def _packet_geometry(cfg: ScenarioConfig) -> tuple[float, float]:
    """(center, width) of the initial packet, for the feasibility estimate."""
    ini = cfg.initial_state
    if ini.kind == "gaussian":
        return ini.center, ini.width
    sigma = math.sqrt(cfg.units.hbar / (cfg.units.mass * ini.omega))
    center = math.sqrt(2.0 * cfg.units.hbar / (cfg.units.mass * ini.omega)) * (
        ini.alpha.real
    )
    return center, sigma


def validate_feasibility(cfg: ScenarioConfig) -> None:
    """Fail fast if the configured boosts cannot fit inside the guard bands.

    Requires max|v| * T + 6 * width < margin, where the margin is the
    distance from the packet center to the nearest guard-band edge. This is
    a coarse pre-check; the propagator and boost operators still enforce the
    guard bands at run time.
    """
    center, width = _packet_geometry(cfg)
    half = 0.5 * cfg.grid.length
    domain_center = cfg.grid.x_min + half
    usable = half - GUARD_BAND_FRACTION * cfg.grid.length
    margin = usable - abs(center - domain_center)
    v_max = max((abs(v) for v in cfg.boosts), default=0.0)
    needed = v_max * cfg.evolution.duration + 6.0 * width
    if needed >= margin:
        raise DomainOverflowError(
            f"scenario '{cfg.label}' cannot fit: max|v|*T + 6*width = "
            f"{needed:.3g} exceeds the domain margin {margin:.3g}; enlarge the "
            f"box or reduce the boost velocities"
        )
