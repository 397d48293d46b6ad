"""JSON surface of `ScenarioConfig`, validated with pydantic.

Example document (every key of `quadrature`, and every key with a default, may be omitted)::

    {
      "name": "scenario-a",
      "ego": {"pose": {"x": 0, "y": 4, "heading": 0}, "speed": 1, "turn_rate": 0},
      "object": {"pose": {"x": 4, "y": 0, "heading": 1.5707963267948966}, "speed": 1},
      "ego_shape": {"length": 4.5, "width": 2},
      "object_radius": 2,
      "uncertainty": {"lambda": 6, "d0": 1, "sigma_max_1": 2, "sigma_max_2": 5},
      "dt": 0.1,
      "horizon": 8,
      "mcs_samples": 100000,
      "mcs_seed": 0,
      "n_circles": 2,
      "n_axes": 1,
      "quadrature": {"abs_tol": 1e-6, "rel_tol": 1e-6, "max_subdivisions": 50}
    }
"""

import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from circlepoc.gaussian import QuadratureSpec, RandomSeed
from circlepoc.geometry import Pose, RectangleFootprint, Vec2
from circlepoc.log import get_logger
from circlepoc.scenario import (
    DEFAULT_DT,
    DEFAULT_HORIZON,
    DEFAULT_SCENARIO_SAMPLES,
    ActorState,
    ScenarioConfig,
    UncertaintyModel,
)

__all__ = [
    "ConfigError",
    "ScenarioConfigModel",
    "dump_scenario_config",
    "load_scenario_config",
]

logger = get_logger(__name__)


class ConfigError(ValueError): ...


def _display_path(path: Path) -> str:
    """Shortest of the absolute path and its forms relative to the working and the home directory"""
    candidates = [path]
    for base, symbol in ((Path.cwd(), "."), (Path.home(), "~")):
        if path.is_relative_to(base):
            candidates.append(symbol / path.relative_to(base))
    return min(candidates, key=lambda candidate: len(str(candidate))).as_posix()


def _link(path: Path, lineno: int | None = None) -> str:
    location = f'File "{_display_path(path.resolve())}"'
    return location if lineno is None else f"{location}, line {lineno}"


class _Schema(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)


class PoseModel(_Schema):
    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)
    heading: float = Field(default=0.0, allow_inf_nan=False)


class ActorModel(_Schema):
    pose: PoseModel
    speed: float = Field(default=0.0, allow_inf_nan=False)
    turn_rate: float = Field(default=0.0, allow_inf_nan=False)


class ShapeModel(_Schema):
    length: float = Field(gt=0, allow_inf_nan=False)
    width: float = Field(gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _longer_than_wide(self) -> "ShapeModel":
        if self.length <= self.width:
            raise ValueError(f"length {self.length} must exceed width {self.width}")
        return self


class UncertaintySchema(_Schema):
    steepness: float = Field(alias="lambda", gt=0, allow_inf_nan=False)
    midpoint_distance: float = Field(alias="d0", gt=0, allow_inf_nan=False)
    sigma_max_1: float = Field(gt=0, allow_inf_nan=False)
    sigma_max_2: float = Field(gt=0, allow_inf_nan=False)


class QuadratureModel(_Schema):
    abs_tol: float = Field(default=1e-6, gt=0)
    rel_tol: float = Field(default=1e-6, gt=0)
    max_subdivisions: int = Field(default=50, ge=1)


class ScenarioConfigModel(_Schema):
    name: str = Field(min_length=1)
    ego: ActorModel
    object: ActorModel
    ego_shape: ShapeModel
    object_radius: float = Field(ge=0, allow_inf_nan=False)
    uncertainty: UncertaintySchema
    dt: float = Field(default=DEFAULT_DT, gt=0, allow_inf_nan=False)
    horizon: float = Field(default=DEFAULT_HORIZON, gt=0, allow_inf_nan=False)
    mcs_samples: int = Field(default=DEFAULT_SCENARIO_SAMPLES, ge=1)
    mcs_seed: int = Field(default=0, ge=0, lt=2**64)
    n_circles: int = Field(default=2, ge=1)
    n_axes: int = Field(default=1, ge=1)
    quadrature: QuadratureModel = Field(default_factory=QuadratureModel)

    @model_validator(mode="after")
    def _horizon_covers_a_step(self) -> "ScenarioConfigModel":
        if self.horizon < self.dt:
            raise ValueError(f"horizon {self.horizon} must be at least dt {self.dt}")
        if self.n_circles % self.n_axes:
            raise ValueError(f"n_circles {self.n_circles} is not divisible by n_axes {self.n_axes}")
        return self

    def to_config(self) -> ScenarioConfig:
        def actor(model: ActorModel) -> ActorState:
            return ActorState(
                pose=Pose(Vec2(model.pose.x, model.pose.y), model.pose.heading),
                speed=model.speed,
                turn_rate=model.turn_rate,
            )

        return ScenarioConfig(
            name=self.name,
            ego=actor(self.ego),
            object=actor(self.object),
            ego_shape=RectangleFootprint(self.ego_shape.length, self.ego_shape.width),
            object_radius=self.object_radius,
            uncertainty=UncertaintyModel(
                steepness=self.uncertainty.steepness,
                midpoint_distance=self.uncertainty.midpoint_distance,
                sigma_max_1=self.uncertainty.sigma_max_1,
                sigma_max_2=self.uncertainty.sigma_max_2,
            ),
            dt=self.dt,
            horizon=self.horizon,
            mcs_samples=self.mcs_samples,
            mcs_seed=RandomSeed(self.mcs_seed),
            n_circles=self.n_circles,
            n_axes=self.n_axes,
            quadrature=QuadratureSpec(
                abs_tol=self.quadrature.abs_tol,
                rel_tol=self.quadrature.rel_tol,
                max_subdivisions=self.quadrature.max_subdivisions,
            ),
        )

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> "ScenarioConfigModel":
        def actor(state: ActorState) -> dict[str, Any]:
            position = state.pose.position
            return {
                "pose": {"x": position.x, "y": position.y, "heading": state.pose.heading},
                "speed": state.speed,
                "turn_rate": state.turn_rate,
            }

        return cls.model_validate(
            {
                "name": config.name,
                "ego": actor(config.ego),
                "object": actor(config.object),
                "ego_shape": {"length": config.ego_shape.length, "width": config.ego_shape.width},
                "object_radius": config.object_radius,
                "uncertainty": {
                    "lambda": config.uncertainty.steepness,
                    "d0": config.uncertainty.midpoint_distance,
                    "sigma_max_1": config.uncertainty.sigma_max_1,
                    "sigma_max_2": config.uncertainty.sigma_max_2,
                },
                "dt": config.dt,
                "horizon": config.horizon,
                "mcs_samples": config.mcs_samples,
                "mcs_seed": config.mcs_seed.seed,
                "n_circles": config.n_circles,
                "n_axes": config.n_axes,
                "quadrature": {
                    "abs_tol": config.quadrature.abs_tol,
                    "rel_tol": config.quadrature.rel_tol,
                    "max_subdivisions": config.quadrature.max_subdivisions,
                },
            }
        )


def _describe(error: ValidationError) -> str:
    messages = []
    for detail in error.errors():
        location = ".".join(str(part) for part in detail["loc"]) or "<root>"
        messages.append(f"{location}: {detail['msg']}")
    return "; ".join(messages)


def load_scenario_config(path: Path | str) -> ScenarioConfig:
    """Read and validate a scenario JSON document.

    Raises:
        ConfigError: naming the line of a JSON syntax error, or the dotted path of each invalid field.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise ConfigError(f"{_link(path)} - cannot be read: {error.strerror}") from error
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(f"{_link(path, error.lineno)} - invalid JSON: {error.msg}") from error
    try:
        model = ScenarioConfigModel.model_validate(data)
    except ValidationError as error:
        raise ConfigError(f"{_link(path)} - {_describe(error)}") from error
    try:
        config = model.to_config()
    except ValueError as error:
        raise ConfigError(f"{_link(path)} - {error}") from error
    logger.debug("Loaded scenario %s from %s", config.name, _link(path))
    return config


def dump_scenario_config(config: ScenarioConfig, path: Path | str) -> Path:
    """Write `config` as a JSON document `load_scenario_config` accepts"""
    path = Path(path)
    document = ScenarioConfigModel.from_config(config).model_dump(by_alias=True)
    with path.open("w", encoding="utf-8", newline="\n") as file:
        json.dump(document, file, indent=2)
        file.write("\n")
    return path
