"""Experiment configuration: INI-style sectioned key-value text.

Parsing is strict: unknown sections or keys are rejected, every problem in
the file is collected (not just the first), and a parsed configuration
serializes back to a canonical text that reparses to an equal object.
Seeds are always explicit; there is no wall-clock default.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, fields as dc_fields

from .background import BackgroundSpec
from .doubleslit import COUPLINGS, SlitGeometry
from .errors import ConfigError
from .probability import ProbabilityModel
from .tensors import C_LIGHT

KINDS = (
    "background-statistics",
    "deviation-trajectory",
    "derivation-gap",
    "double-slit",
)

CONVENTION_TOKENS = {"s_over_2s0": "S/(2S0)", "s_over_s0": "S/S0"}


@dataclass(frozen=True)
class SlitSettings:
    wavelength: float
    speed: float
    emit_time: float = 0.0
    quadrature_points: int = 16
    coupling: str = "amplitude"


@dataclass(frozen=True)
class DeviationSettings:
    dt: float
    steps: int
    ell0_x: float = 1.0
    ell0_y: float = 0.0
    ell0_z: float = 0.0
    ell_dot0_x: float = 0.0
    ell_dot0_y: float = 0.0
    ell_dot0_z: float = 0.0
    pos_x: float = 0.0
    pos_y: float = 0.0
    pos_z: float = 0.0
    t0: float = 0.0


@dataclass(frozen=True)
class GridSettings:
    cells: int
    extent: float
    sigma0: float
    momentum: float = 0.0
    center: float = 0.0
    mass: float = 1.0
    s0: float = 0.0  # 0 means: take S0 from the [probability] section
    potential: str = "none"
    omega: float = 0.0
    boundary: str = "periodic"
    convention: str = "s_over_2s0"


@dataclass(frozen=True)
class EvolutionSettings:
    dt: float
    steps: int
    sample_every: int = 0  # 0 means: steps // 10, at least 1
    amp_floor: float = 1e-3


@dataclass(frozen=True)
class SamplingSettings:
    n_points: int = 4096
    extent: float = 0.0  # 0 means: five times the longest mode wavelength


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    seed: int
    output_dir: str
    realizations: int = 1
    background: BackgroundSpec | None = None
    geometry: SlitGeometry | None = None
    slit: SlitSettings | None = None
    deviation: DeviationSettings | None = None
    grid: GridSettings | None = None
    evolution: EvolutionSettings | None = None
    sampling: SamplingSettings | None = None
    probability: ProbabilityModel | None = None


# key tables: name -> (type tag, required, default, extra)
_EXPERIMENT_KEYS = {
    "kind": ("enum", True, None, KINDS),
    "seed": ("int", True, None, None),
    "output_dir": ("str", True, None, None),
    "realizations": ("int", False, 1, None),
}
_BACKGROUND_KEYS = {
    "mode_count": ("int", True, None, None),
    "strain_rms": ("float", True, None, None),
    "f_min": ("float", True, None, None),
    "f_max": ("float", True, None, None),
    "polarization_plus": ("float", False, 0.5, None),
    "polarization_cross": ("float", False, 0.5, None),
    "isotropic": ("bool", False, True, None),
    "light_speed": ("float", False, C_LIGHT, None),
    "max_strain": ("float", False, 0.1, None),
}
_GEOMETRY_KEYS = {
    "L1": ("float", True, None, None),
    "L2": ("float", True, None, None),
    "d": ("float", True, None, None),
    "w": ("float", False, 0.0, None),
    "screen_extent": ("float", True, None, None),
    "screen_samples": ("int", False, 256, None),
}
_SLIT_KEYS = {
    "wavelength": ("float", True, None, None),
    "speed": ("float", True, None, None),
    "emit_time": ("float", False, 0.0, None),
    "quadrature_points": ("int", False, 16, None),
    "coupling": ("enum", False, "amplitude", COUPLINGS),
}
_DEVIATION_KEYS = {
    "dt": ("float", True, None, None),
    "steps": ("int", True, None, None),
    "ell0_x": ("float", False, 1.0, None),
    "ell0_y": ("float", False, 0.0, None),
    "ell0_z": ("float", False, 0.0, None),
    "ell_dot0_x": ("float", False, 0.0, None),
    "ell_dot0_y": ("float", False, 0.0, None),
    "ell_dot0_z": ("float", False, 0.0, None),
    "pos_x": ("float", False, 0.0, None),
    "pos_y": ("float", False, 0.0, None),
    "pos_z": ("float", False, 0.0, None),
    "t0": ("float", False, 0.0, None),
}
_GRID_KEYS = {
    "cells": ("int", True, None, None),
    "extent": ("float", True, None, None),
    "sigma0": ("float", True, None, None),
    "momentum": ("float", False, 0.0, None),
    "center": ("float", False, 0.0, None),
    "mass": ("float", False, 1.0, None),
    "s0": ("float", False, 0.0, None),
    "potential": ("enum", False, "none", ("none", "harmonic")),
    "omega": ("float", False, 0.0, None),
    "boundary": ("enum", False, "periodic", ("periodic", "dirichlet")),
    "convention": ("enum", False, "s_over_2s0", tuple(CONVENTION_TOKENS)),
}
_EVOLUTION_KEYS = {
    "dt": ("float", True, None, None),
    "steps": ("int", True, None, None),
    "sample_every": ("int", False, 0, None),
    "amp_floor": ("float", False, 1e-3, None),
}
_SAMPLING_KEYS = {
    "n_points": ("int", False, 4096, None),
    "extent": ("float", False, 0.0, None),
}
_PROBABILITY_KEYS = {
    "sigma": ("float", True, None, None),
    "mass": ("float", True, None, None),
    "timescale": ("float", False, 1.0, None),
}

_SECTION_KEYS = {
    "experiment": _EXPERIMENT_KEYS,
    "background": _BACKGROUND_KEYS,
    "geometry": _GEOMETRY_KEYS,
    "slit": _SLIT_KEYS,
    "deviation": _DEVIATION_KEYS,
    "grid": _GRID_KEYS,
    "evolution": _EVOLUTION_KEYS,
    "sampling": _SAMPLING_KEYS,
    "probability": _PROBABILITY_KEYS,
}

_REQUIRED_SECTIONS = {
    "background-statistics": ("background",),
    "deviation-trajectory": ("background", "deviation"),
    "derivation-gap": ("grid", "evolution"),
    "double-slit": ("background", "geometry", "slit"),
}
_OPTIONAL_SECTIONS = {
    "background-statistics": ("sampling",),
    "deviation-trajectory": (),
    "derivation-gap": ("probability",),
    "double-slit": (),
}

_BOOL_TRUE = {"true", "yes", "on", "1"}
_BOOL_FALSE = {"false", "no", "off", "0"}


def _convert(raw: str, tag, choices, path: str, errors: list[str]):
    raw = raw.strip()
    try:
        if tag == "int":
            return int(raw)
        if tag == "float":
            return float(raw)
        if tag == "bool":
            low = raw.lower()
            if low in _BOOL_TRUE:
                return True
            if low in _BOOL_FALSE:
                return False
            raise ValueError(raw)
        if tag == "enum":
            if raw not in choices:
                errors.append(f"{path}: must be one of {', '.join(choices)}")
                return None
            return raw
        return raw
    except ValueError:
        errors.append(f"{path}: cannot parse {raw!r} as {tag}")
        return None


def _parse_section(cp, section: str, errors: list[str]) -> dict | None:
    keys = _SECTION_KEYS[section]
    if not cp.has_section(section):
        errors.append(f"{section}: required section is missing")
        return None
    out = {}
    seen = set()
    for key, raw in cp.items(section):
        if key not in keys:
            errors.append(f"{section}.{key}: unknown key")
            continue
        seen.add(key)
        tag, _, _, choices = keys[key]
        value = _convert(raw, tag, choices, f"{section}.{key}", errors)
        if value is not None:
            out[key] = value
    for key, (tag, required, default, _) in keys.items():
        if key in seen:
            continue
        if required:
            errors.append(f"{section}.{key}: required key is missing")
        else:
            out[key] = default
    return out


def _build(cls, values: dict):
    names = {f.name for f in dc_fields(cls)}
    return cls(**{k: v for k, v in values.items() if k in names})


def parse_config(text: str) -> ExperimentConfig:
    """Parse and fully validate a configuration; raises ConfigError with the
    complete error list on any problem."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep key case (L1, L2)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc}"]) from exc

    errors: list[str] = []
    exp = _parse_section(cp, "experiment", errors)
    kind = exp.get("kind") if exp else None

    if kind in _REQUIRED_SECTIONS:
        wanted = set(_REQUIRED_SECTIONS[kind]) | set(_OPTIONAL_SECTIONS[kind])
        for section in cp.sections():
            if section == "experiment":
                continue
            if section not in _SECTION_KEYS:
                errors.append(f"{section}: unknown section")
            elif section not in wanted:
                errors.append(f"{section}: section not used by kind '{kind}'")

    sections: dict[str, dict | None] = {}
    if kind in _REQUIRED_SECTIONS:
        for section in _REQUIRED_SECTIONS[kind]:
            sections[section] = _parse_section(cp, section, errors)
        for section in _OPTIONAL_SECTIONS[kind]:
            if cp.has_section(section):
                sections[section] = _parse_section(cp, section, errors)

    # second phase: build and domain-validate whatever parsed cleanly, so a
    # single pass reports type errors and value errors together
    def build(cls, section):
        values = sections.get(section)
        if values is None:
            return None
        try:
            return _build(cls, values)
        except (TypeError, ValueError):
            # conversion errors in this section were already recorded; object
            # construction can legitimately fail on the partial value set
            return None

    background = build(BackgroundSpec, "background")
    if background is not None:
        errors.extend(background.validation_errors())
    geometry = build(SlitGeometry, "geometry")
    if geometry is not None:
        errors.extend(geometry.validation_errors())
    slit = build(SlitSettings, "slit")
    if slit is not None:
        if not slit.wavelength > 0.0:
            errors.append("slit.wavelength: must be > 0")
        if not slit.speed > 0.0:
            errors.append("slit.speed: must be > 0")
        if slit.quadrature_points < 1:
            errors.append("slit.quadrature_points: must be >= 1")
    deviation = build(DeviationSettings, "deviation")
    if deviation is not None:
        if not deviation.dt > 0.0:
            errors.append("deviation.dt: must be > 0")
        if deviation.steps < 1:
            errors.append("deviation.steps: must be >= 1")
    grid = build(GridSettings, "grid")
    if grid is not None:
        if grid.cells < 8:
            errors.append("grid.cells: must be >= 8")
        if not grid.extent > 0.0:
            errors.append("grid.extent: must be > 0")
        if not grid.sigma0 > 0.0:
            errors.append("grid.sigma0: must be > 0")
        if not grid.mass > 0.0:
            errors.append("grid.mass: must be > 0")
        if grid.s0 < 0.0:
            errors.append("grid.s0: must be >= 0")
        if grid.potential == "harmonic" and not grid.omega > 0.0:
            errors.append("grid.omega: must be > 0 for a harmonic potential")
    evolution = build(EvolutionSettings, "evolution")
    if evolution is not None:
        if not evolution.dt > 0.0:
            errors.append("evolution.dt: must be > 0")
        if evolution.steps < 1:
            errors.append("evolution.steps: must be >= 1")
        if evolution.sample_every < 0:
            errors.append("evolution.sample_every: must be >= 0")
        if not evolution.amp_floor >= 0.0:
            errors.append("evolution.amp_floor: must be >= 0")
    sampling = build(SamplingSettings, "sampling")
    if sampling is not None:
        if sampling.n_points < 1:
            errors.append("sampling.n_points: must be >= 1")
    elif kind == "background-statistics":
        sampling = SamplingSettings()
    probability = None
    if sections.get("probability") is not None:
        try:
            probability = _build(ProbabilityModel, sections["probability"])
        except TypeError:
            pass  # missing keys already recorded
        except ValueError as exc:
            errors.append(f"probability: {exc}")

    if exp is not None and isinstance(exp.get("seed"), int) and exp["seed"] < 0:
        errors.append("experiment.seed: must be >= 0")
    if exp is not None and isinstance(exp.get("realizations"), int):
        if exp["realizations"] < 1:
            errors.append("experiment.realizations: must be >= 1")
        if kind == "double-slit" and exp["realizations"] < 2:
            errors.append("experiment.realizations: must be >= 2 for double-slit")
    if grid is not None:
        if grid.s0 == 0.0 and "probability" not in sections:
            errors.append("grid.s0: give s0 or add a [probability] section")
        if grid.s0 > 0.0 and "probability" in sections:
            errors.append("grid.s0: give either s0 or [probability], not both")

    if errors:
        raise ConfigError(errors)

    return ExperimentConfig(
        kind=kind,
        seed=exp["seed"],
        output_dir=exp["output_dir"],
        realizations=exp["realizations"],
        background=background,
        geometry=geometry,
        slit=slit,
        deviation=deviation,
        grid=grid,
        evolution=evolution,
        sampling=sampling,
        probability=probability,
    )


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(config: ExperimentConfig) -> str:
    """Canonical text form; parse_config(serialize_config(c)) == c."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["experiment"] = {
        "kind": config.kind,
        "seed": str(config.seed),
        "output_dir": config.output_dir,
        "realizations": str(config.realizations),
    }
    objects = {
        "background": config.background,
        "geometry": config.geometry,
        "slit": config.slit,
        "deviation": config.deviation,
        "grid": config.grid,
        "evolution": config.evolution,
        "sampling": config.sampling,
        "probability": config.probability,
    }
    for section, obj in objects.items():
        if obj is None:
            continue
        cp[section] = {
            f.name: _format_value(getattr(obj, f.name))
            for f in dc_fields(obj)
            if f.name in _SECTION_KEYS[section]
        }
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def override_config_text(text: str, overrides: dict[str, str]) -> str:
    """Apply raw 'section.key = value' overrides to configuration text."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc}"]) from exc
    for path, value in overrides.items():
        if "." not in path:
            raise ConfigError([f"override {path!r}: expected section.key"])
        section, key = path.split(".", 1)
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, key, value)
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
