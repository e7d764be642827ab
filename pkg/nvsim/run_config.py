"""
run_config.py
-------------

Validated run configurations for the command line and the task queue.

A run is described by a TOML (or JSON) document with one block per
parameter group. ``--set key=value`` overrides are applied to the raw
document before validation; values are TOML literals, so ``1.6``,
``true`` and ``[0, 0.5, 1]`` keep their types and anything else is taken
as a string. A sidecar JSON written by a previous run is accepted too and
reproduces that run.
"""

from __future__ import annotations

import copy
import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
import typing
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple, Type

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .config import NvsimConfig
from .errors import ConfigError
from .physics.params import (
    D_ES,
    D_GS,
    DEFAULT_OMEGA_M,
    DELTA_PRIME,
    LAMBDA_XY,
    LAMBDA_Z,
    DriveParams,
    FullLevelParams,
    OpticalParams,
    PulseSequence,
    StaticStrain,
    StressCoupling,
)
from .physics.strain_model import stress_to_drive

logger = logging.getLogger(__name__)

Scenario = Literal["ple", "map", "floquet", "rabi", "cdd", "fit", "polarization", "resonator"]
SCENARIOS: Tuple[str, ...] = typing.get_args(Scenario)

REQUIRED_BLOCKS: Dict[str, Tuple[str, ...]] = {
    "ple": ("strain", "drive", "optics", "grid"),
    "map": ("strain", "drive", "optics", "grid"),
    "floquet": ("drive", "optics"),
    "rabi": ("strain", "drive", "optics"),
    "cdd": ("strain", "drive", "optics"),
    "fit": ("strain", "drive", "optics", "grid", "fit"),
    "polarization": ("strain",),
    "resonator": ("resonator",),
}


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


class StrainBlock(_Block):
    v_e1: float
    v_e2: float
    v_a1: float = 0.0

    def params(self) -> StaticStrain:
        return StaticStrain(v_e1=self.v_e1, v_e2=self.v_e2, v_a1=self.v_a1)


class DriveBlock(_Block):
    omega_m: float = Field(gt=0)
    amp_a1: float = 0.0
    amp_e1: float = 0.0
    amp_e2: float = 0.0
    phase: float = 0.0
    # alternative to the amplitudes: uniaxial stress amplitude in Pa
    stress_pa: Optional[float] = Field(default=None, ge=0)
    off_axis: float = 0.0

    def params(self) -> DriveParams:
        if self.stress_pa is not None:
            return stress_to_drive(
                self.stress_pa,
                StressCoupling(),
                self.off_axis,
                omega_m=self.omega_m,
                phase=self.phase,
            )
        return DriveParams(
            amp_a1=self.amp_a1,
            amp_e1=self.amp_e1,
            omega_m=self.omega_m,
            amp_e2=self.amp_e2,
            phase=self.phase,
        )


class OpticsBlock(_Block):
    delta: float = 0.0
    omega: float = Field(default=0.0, ge=0)
    gamma: float = Field(default=0.1, gt=0)

    def params(self) -> OpticalParams:
        return OpticalParams(delta=self.delta, omega=self.omega, gamma=self.gamma)


class LevelsBlock(_Block):
    lambda_z: float = LAMBDA_Z
    d_es: float = D_ES
    delta_prime: float = DELTA_PRIME
    lambda_xy: float = LAMBDA_XY
    d_gs: float = D_GS
    v_parallel: float = 0.0
    omega_mw: float = 0.0

    def params(self) -> FullLevelParams:
        return FullLevelParams(**self.model_dump())


class SequenceBlock(_Block):
    ring_up: float = Field(default=2000.0, gt=0)
    collect: float = Field(default=200.0, gt=0)
    dt: Optional[float] = Field(default=None, gt=0)
    simulate_ring_up: bool = False

    def params(self) -> PulseSequence:
        return PulseSequence(**self.model_dump())


class GridBlock(_Block):
    detunings: Optional[List[float]] = Field(default=None, min_length=1)
    detuning_start: Optional[float] = None
    detuning_stop: Optional[float] = None
    detuning_points: Optional[int] = Field(default=None, ge=1)
    amplitude_scalings: Optional[List[float]] = Field(default=None, min_length=1)
    amplitude_start: float = 0.0
    amplitude_stop: Optional[float] = None
    amplitude_points: Optional[int] = Field(default=None, ge=1)
    powers_mw: Optional[List[float]] = Field(default=None, min_length=1)
    power_calibration: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _detuning_axis_given(self) -> "GridBlock":
        ranged = (self.detuning_start, self.detuning_stop, self.detuning_points)
        if self.detunings is None and any(v is None for v in ranged):
            raise ValueError("give detunings or detuning_start, detuning_stop and detuning_points")
        if self.powers_mw is not None and self.power_calibration is None:
            raise ValueError("powers_mw needs power_calibration")
        return self

    def detuning_axis(self) -> np.ndarray:
        if self.detunings is not None:
            return np.asarray(self.detunings, dtype=float)
        return np.linspace(self.detuning_start, self.detuning_stop, self.detuning_points)

    @property
    def has_amplitudes(self) -> bool:
        return (
            self.amplitude_scalings is not None
            or self.powers_mw is not None
            or (self.amplitude_stop is not None and self.amplitude_points is not None)
        )

    def scaling_axis(self) -> np.ndarray:
        if self.amplitude_scalings is not None:
            return np.asarray(self.amplitude_scalings, dtype=float)
        if self.amplitude_stop is not None and self.amplitude_points is not None:
            return np.linspace(self.amplitude_start, self.amplitude_stop, self.amplitude_points)
        return np.ones(1)


class OutputBlock(_Block):
    dir: Optional[str] = None
    name: Optional[str] = None


class FloquetBlock(_Block):
    trunc_n: Optional[int] = Field(default=None, ge=1)
    max_order: int = Field(default=15, ge=0)
    min_frac: float = Field(default=0.1, ge=0, le=1)
    branch: Literal["x", "y"] = "x"


class RabiBlock(_Block):
    t_span: float = Field(default=20.0, gt=0)
    pulse_duration: Optional[float] = Field(default=None, gt=0)
    branch: Literal["x", "y"] = "x"
    phonons: Optional[int] = Field(default=None, ge=1)
    store_every: int = Field(default=5, ge=1)
    drive_during_pulse: bool = False


class CddBlock(_Block):
    channel: Literal["x", "y"] = "x"
    eps_max: float = Field(default=0.02, gt=0)
    eps_points: int = Field(default=9, ge=3)
    method: Literal["floquet", "ple"] = "floquet"
    trunc_n: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _odd_points(self) -> "CddBlock":
        if self.eps_points % 2 == 0:
            raise ValueError("eps_points must be odd so the axis contains 0")
        return self

    def eps_axis(self) -> np.ndarray:
        return np.linspace(-self.eps_max, self.eps_max, self.eps_points)


class FitBlock(_Block):
    model: Literal["lindblad", "sidebands"] = "sidebands"
    target_amp_a1: float
    target_amp_e1: float
    noise: float = Field(default=0.0, ge=0)
    seed: Optional[int] = None
    xatol: float = Field(default=1e-3, gt=0)
    max_iter: int = Field(default=500, ge=1)
    bounds: Optional[List[Tuple[Optional[float], Optional[float]]]] = Field(default=None, min_length=2, max_length=2)


class PolarizationBlock(_Block):
    phi0: float = 0.0
    s0: float = Field(default=1.0, ge=0)
    points: int = Field(default=181, ge=2)


class ResonatorBlock(_Block):
    f_lo: float = Field(default=1.0, gt=0)
    f_hi: float = Field(default=1.6, gt=0)
    fsr: float = Field(default=0.0167, gt=0)
    q: float = Field(default=1500.0, gt=0)
    scan_start: float = Field(default=1.37, gt=0)
    scan_stop: float = Field(default=1.40, gt=0)
    scan_points: int = Field(default=301, ge=1)
    base_amp: float = Field(default=13.0, ge=0)
    s0: float = Field(default=1.0, ge=0)
    min_frac: float = Field(default=0.1, ge=0, le=1)

    def scan_axis(self) -> np.ndarray:
        return np.linspace(self.scan_start, self.scan_stop, self.scan_points)


class RunConfig(_Block):
    scenario: Scenario
    model: Literal["spin0", "full8"] = "spin0"
    init: Literal["pure-ground", "mixed-spin"] = "pure-ground"
    workers: Optional[int] = Field(default=None, ge=1)
    field_x: float = 0.0
    field_y: float = 0.0

    strain: Optional[StrainBlock] = None
    drive: Optional[DriveBlock] = None
    optics: Optional[OpticsBlock] = None
    levels: LevelsBlock = Field(default_factory=LevelsBlock)
    sequence: SequenceBlock = Field(default_factory=SequenceBlock)
    grid: Optional[GridBlock] = None
    output: OutputBlock = Field(default_factory=OutputBlock)

    floquet: FloquetBlock = Field(default_factory=FloquetBlock)
    rabi: RabiBlock = Field(default_factory=RabiBlock)
    cdd: CddBlock = Field(default_factory=CddBlock)
    fit: Optional[FitBlock] = None
    polarization: PolarizationBlock = Field(default_factory=PolarizationBlock)
    resonator: Optional[ResonatorBlock] = None

    def check_required(self) -> None:
        for block in REQUIRED_BLOCKS[self.scenario]:
            if getattr(self, block) is None:
                raise ConfigError(f"scenario '{self.scenario}' needs a [{block}] block", key=block)
        if self.scenario == "map" and not self.grid.has_amplitudes:
            raise ConfigError(
                "scenario 'map' needs grid.amplitude_scalings, grid.amplitude_stop/amplitude_points or grid.powers_mw",
                key="grid.amplitude_scalings",
            )
        if self.init == "mixed-spin" and self.model != "full8":
            raise ConfigError("init 'mixed-spin' needs model 'full8'", key="init")

    @property
    def field(self) -> Tuple[float, float]:
        return (self.field_x, self.field_y)


# ---------------------------------------------------------------------------
# Documents and overrides


def resolve_config_path(path: str | Path) -> Path:
    """The path as given, else the same name under the bundled configs directory."""
    candidate = Path(path)
    if candidate.exists():
        return candidate
    bundled = Path(NvsimConfig.CONFIG_DIR) / candidate.name
    if bundled.exists():
        return bundled
    raise ConfigError(f"config file '{path}' not found", key="config")


def load_document(path: str | Path) -> Dict[str, Any]:
    """Raw mapping from a TOML, JSON or sidecar JSON file."""
    source = resolve_config_path(path)
    suffix = source.suffix.lower()
    if suffix not in NvsimConfig.SUPPORTED_CONFIG_FORMATS:
        raise ConfigError(f"unsupported config format '{suffix}'", key="config")
    try:
        if suffix == ".toml":
            with open(source, "rb") as f:
                doc = tomllib.load(f)
        else:
            with open(source, "r", encoding="utf-8") as f:
                doc = json.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid TOML in '{source}': {e}", key="config") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in '{source}': {e}", key="config") from e

    if isinstance(doc, dict) and isinstance(doc.get("config"), dict) and "nvsim_version" in doc:
        logger.info("Re-using the resolved config of a previous run from %s", source)
        doc = doc["config"]
    if not isinstance(doc, dict):
        raise ConfigError(f"config '{source}' is not a table", key="config")
    return doc


def parse_value(raw: str) -> Any:
    """A TOML literal, or the raw text when it is not one."""
    try:
        return tomllib.loads(f"value = {raw}")["value"]
    except tomllib.TOMLDecodeError:
        return raw


def _block_model(annotation: Any) -> Optional[Type[BaseModel]]:
    if isinstance(annotation, type) and issubclass(annotation, BaseModel):
        return annotation
    for arg in typing.get_args(annotation):
        found = _block_model(arg)
        if found is not None:
            return found
    return None


def _check_key(key: str) -> None:
    model: Optional[Type[BaseModel]] = RunConfig
    for part in key.split("."):
        if model is None or part not in model.model_fields:
            raise ConfigError(f"unknown config key '{key}'", key=key)
        model = _block_model(model.model_fields[part].annotation)


def apply_overrides(doc: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """Copy of doc with each ``dotted.key=value`` applied."""
    out = copy.deepcopy(doc)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override '{item}' is not key=value", key=item)
        key, raw = (s.strip() for s in item.split("=", 1))
        _check_key(key)
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            child = node.get(part)
            if not isinstance(child, dict):
                child = node[part] = {}
            node = child
        node[parts[-1]] = parse_value(raw)
        logger.debug("Override %s = %r", key, node[parts[-1]])
    return out


def _describe(error: ValidationError) -> ConfigError:
    details = error.errors()
    first = details[0]
    key = ".".join(str(p) for p in first["loc"])
    lines = [f"{'.'.join(str(p) for p in d['loc']) or '<root>'}: {d['msg']}" for d in details]
    return ConfigError("invalid configuration:\n  " + "\n  ".join(lines), key=key)


def build_run_config(
    doc: Dict[str, Any],
    overrides: Iterable[str] = (),
    scenario: Optional[str] = None,
) -> RunConfig:
    """Validated RunConfig from a raw mapping (plus overrides and scenario)."""
    merged = apply_overrides(doc, overrides)
    if scenario is not None:
        merged["scenario"] = scenario
    try:
        cfg = RunConfig.model_validate(merged)
    except ValidationError as e:
        raise _describe(e) from e
    cfg.check_required()
    return cfg


def load_run_config(
    path: str | Path,
    overrides: Iterable[str] = (),
    scenario: Optional[str] = None,
) -> RunConfig:
    return build_run_config(load_document(path), overrides, scenario)
