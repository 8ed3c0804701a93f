"""Run configuration: a strict JSON key tree validated with pydantic."""

import json
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .constitutive import PhysicalParams
from .errors import ConfigError
from .mesh import Mesh
from .state import PRESETS, InitialCondition, _PRESET_PARAMS
from .timestepper import StepControl


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class MeshConfig(_Strict):
    L: float = Field(gt=0)
    N: int = Field(ge=2)


class ParamsConfig(_Strict):
    K: float = Field(gt=0)
    c_v: float = Field(1.0, gt=0)
    mu_bar: float = Field(gt=0)
    kappa_bar: float = Field(gt=0)
    alpha: float = Field(0.0, ge=0)
    beta: float = Field(0.0, ge=0)


class ControlConfig(_Strict):
    t_end: float = Field(gt=0)
    cfl: float = Field(0.25, gt=0, le=1)
    safety: float = Field(0.9, gt=0)
    dt_min: Optional[float] = Field(None, gt=0)
    max_retries: int = Field(30, ge=0)
    progress_stride: int = Field(0, ge=0)
    compensated: bool = True

    @model_validator(mode="after")
    def _cfl_safety(self):
        if self.cfl * self.safety > 1:
            raise ValueError("cfl*safety must not exceed 1")
        return self


class PresetConfig(_Strict):
    name: str
    tau: Optional[float] = None
    u: Optional[float] = None
    theta: Optional[float] = None
    amplitude: Optional[float] = None
    center: Optional[float] = None
    width: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _known(self):
        if self.name not in PRESETS:
            raise ValueError(f"unknown preset {self.name!r}; choose from {sorted(PRESETS)}")
        given = {k for k, v in self.model_dump().items() if v is not None and k != "name"}
        extra = given - _PRESET_PARAMS[self.name]
        if extra:
            raise ValueError(f"preset {self.name!r} does not take {sorted(extra)}")
        return self

    def as_entry(self):
        return {k: v for k, v in self.model_dump().items() if v is not None}


class TabulatedConfig(_Strict):
    x: List[float]
    tau: List[float]
    u: List[float]
    theta: List[float]

    @model_validator(mode="after")
    def _shapes(self):
        n = len(self.x)
        if n < 2 or any(len(c) != n for c in (self.tau, self.u, self.theta)):
            raise ValueError("tabulated columns need equal length >= 2")
        if any(b <= a for a, b in zip(self.x, self.x[1:])):
            raise ValueError("tabulated x must be strictly increasing")
        return self


class ICConfig(_Strict):
    presets: Optional[List[PresetConfig]] = None
    tabulated: Optional[TabulatedConfig] = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.presets is None) == (self.tabulated is None):
            raise ValueError("give exactly one of 'presets' or 'tabulated'")
        return self


class OutputConfig(_Strict):
    directory: str = "out"
    field_stride: int = Field(0, ge=0)
    timeseries_stride: int = Field(1, ge=1)


class RunConfig(_Strict):
    mesh: MeshConfig
    params: ParamsConfig
    control: ControlConfig
    ic: ICConfig
    output: OutputConfig = OutputConfig()

    def build_mesh(self):
        return Mesh(self.mesh.L, self.mesh.N)

    def physical_params(self):
        return PhysicalParams(**self.params.model_dump())

    def step_control(self):
        return StepControl(**self.control.model_dump())

    def initial_condition(self):
        if self.ic.tabulated is not None:
            t = self.ic.tabulated
            return InitialCondition.tabulated(t.x, t.tau, t.u, t.theta)
        return InitialCondition.from_presets([p.as_entry() for p in self.ic.presets], self.mesh.L)

    def with_updates(self, **sections):
        """Copy with whole sections or single fields replaced.

        ``cfg.with_updates(mesh={"N": 64})`` merges into the mesh section.
        """
        data = self.model_dump()
        for key, value in sections.items():
            if isinstance(value, dict):
                data[key] = {**data[key], **value}
            else:
                data[key] = value
        return parse_config(data)

    @property
    def regime_warnings(self):
        return self.physical_params().regime_warnings


def _format_errors(exc):
    parts = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        parts.append(f"{path}: {err['msg']}")
    return "; ".join(parts)


def parse_config(source):
    """Validate a config given as JSON text or an already-decoded mapping."""
    if isinstance(source, (str, bytes)):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return RunConfig.model_validate(source)
    except ValidationError as exc:
        raise ConfigError(_format_errors(exc)) from exc


def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return parse_config(text)


def serialize_config(cfg):
    return cfg.model_dump_json(indent=2)
