"""Intersection scenarios with distance-dependent uncertainty and a per-step POC corridor."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from scipy import special

from circlepoc.circle import poc_rectangle_mcs
from circlepoc.gaussian import DEFAULT_QUADRATURE, DiagGaussian2, QuadratureSpec, RandomSeed
from circlepoc.geometry import Pose, RectangleFootprint, Vec2
from circlepoc.log import get_logger
from circlepoc.multicircle import lens_overlap_counts, poc_bounds

__all__ = [
    "DEFAULT_DT",
    "DEFAULT_HORIZON",
    "DEFAULT_SCENARIO_SAMPLES",
    "ActorState",
    "ScenarioConfig",
    "ScenarioSummary",
    "TimeSeriesRow",
    "UncertaintyModel",
    "logistic_sigma",
    "propagate",
    "relative_gaussian",
    "run_scenario",
    "scenario_a",
    "scenario_b",
    "summarize",
]

logger = get_logger(__name__)

DEFAULT_DT = 0.1
DEFAULT_HORIZON = 8.0
DEFAULT_SCENARIO_SAMPLES = 100_000


@dataclass(frozen=True, eq=True)
class UncertaintyModel:
    """Logistic growth of the standard deviations with center-to-center distance"""

    steepness: float
    midpoint_distance: float
    sigma_max_1: float
    sigma_max_2: float

    def __post_init__(self) -> None:
        for name in ("steepness", "midpoint_distance", "sigma_max_1", "sigma_max_2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"Uncertainty parameter {name} must be positive, got {value}")


@dataclass(frozen=True, eq=True)
class ActorState:
    pose: Pose
    speed: float = 0.0
    turn_rate: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.speed) and math.isfinite(self.turn_rate)):
            raise ValueError(f"Speed and turn rate must be finite, got {self.speed}, {self.turn_rate}")


@dataclass(frozen=True, eq=True)
class ScenarioConfig:
    name: str
    ego: ActorState
    object: ActorState
    ego_shape: RectangleFootprint
    object_radius: float
    uncertainty: UncertaintyModel
    dt: float = DEFAULT_DT
    horizon: float = DEFAULT_HORIZON
    mcs_samples: int = DEFAULT_SCENARIO_SAMPLES
    mcs_seed: RandomSeed = field(default_factory=RandomSeed)
    n_circles: int = 2
    n_axes: int = 1
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"Time step must be positive, got {self.dt}")
        if not (math.isfinite(self.horizon) and self.horizon >= self.dt):
            raise ValueError(f"Horizon {self.horizon} must be at least one time step ({self.dt})")
        if not (math.isfinite(self.object_radius) and self.object_radius >= 0):
            raise ValueError(f"Object radius must be non-negative, got {self.object_radius}")
        if self.mcs_samples < 1:
            raise ValueError(f"At least one MCS sample per step is required, got {self.mcs_samples}")
        lens_overlap_counts(self.n_circles, self.n_axes)

    @property
    def n_steps(self) -> int:
        return round(self.horizon / self.dt) + 1


@dataclass(frozen=True, eq=True)
class TimeSeriesRow:
    t: float
    ego_pose: Pose
    object_position: Vec2
    distance: float
    sigma1: float
    sigma2: float
    poc_lower: float
    poc_upper: float
    delta: float
    poc_mcs_rect: float
    # zero when unknown, e.g. for rows read back from a file
    mcs_samples: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.poc_lower <= self.poc_upper <= 1.0:
            raise ValueError(f"Row at t={self.t} has an invalid corridor [{self.poc_lower}, {self.poc_upper}]")

    @property
    def mcs_error(self) -> float:
        if not self.mcs_samples:
            return 0.0
        return math.sqrt(self.poc_mcs_rect * (1.0 - self.poc_mcs_rect) / self.mcs_samples)

    def within_corridor(self, sigmas: float = 3.0) -> bool:
        """Whether the rectangle reference lies in the corridor up to `sigmas` standard errors.

        The standard error is taken at whichever of the estimate and the violated bound is larger, so
        an estimate of exactly 0 or 1 does not make the check infinitely strict.
        """
        if not self.mcs_samples:
            return self.poc_lower <= self.poc_mcs_rect <= self.poc_upper

        def slack(bound: float) -> float:
            variance = max(self.poc_mcs_rect * (1.0 - self.poc_mcs_rect), bound * (1.0 - bound))
            return sigmas * math.sqrt(variance / self.mcs_samples)

        return (
            self.poc_lower - slack(self.poc_lower)
            <= self.poc_mcs_rect
            <= self.poc_upper + slack(self.poc_upper)
        )


@dataclass(frozen=True, eq=True)
class ScenarioSummary:
    max_upper: float
    max_upper_time: float
    max_upper_distance: float
    max_delta: float
    max_delta_time: float
    corridor_violations: int


def logistic_sigma(model: UncertaintyModel, d: float) -> tuple[float, float]:
    if not d >= 0:
        raise ValueError(f"Distance must be non-negative, got {d}")
    scale = float(special.expit(model.steepness * (d - model.midpoint_distance)))
    return scale * model.sigma_max_1, scale * model.sigma_max_2


def propagate(state: ActorState, dt: float) -> ActorState:
    """Advance along a constant-turn-rate arc, a straight line when the turn rate is zero"""
    if not dt > 0:
        raise ValueError(f"Propagation step must be positive, got {dt}")
    heading = state.pose.heading
    position = state.pose.position
    if state.turn_rate == 0.0:
        moved = position + Vec2(math.cos(heading), math.sin(heading)) * (state.speed * dt)
        return replace(state, pose=Pose(moved, heading))
    end_heading = heading + state.turn_rate * dt
    radius = state.speed / state.turn_rate
    moved = position + Vec2(
        radius * (math.sin(end_heading) - math.sin(heading)),
        radius * (math.cos(heading) - math.cos(end_heading)),
    )
    return replace(state, pose=Pose(moved, end_heading))


def relative_gaussian(ego: Pose, object_position: Vec2, sigma1: float, sigma2: float) -> DiagGaussian2:
    return DiagGaussian2(ego.to_body(object_position), sigma1, sigma2)


def _state_at(initial: ActorState, t: float) -> ActorState:
    return initial if t == 0.0 else propagate(initial, t)


def _row(config: ScenarioConfig, step: int) -> TimeSeriesRow:
    t = step * config.dt
    ego = _state_at(config.ego, t).pose
    obj = _state_at(config.object, t).pose.position
    distance = (obj - ego.position).norm()
    sigma1, sigma2 = logistic_sigma(config.uncertainty, distance)
    g = relative_gaussian(ego, obj, sigma1, sigma2)
    bounds = poc_bounds(
        config.ego_shape,
        config.object_radius,
        g,
        config.quadrature,
        n_circles=config.n_circles,
        n_axes=config.n_axes,
    )
    reference = poc_rectangle_mcs(
        config.ego_shape, config.object_radius, g, config.mcs_samples, config.mcs_seed.offset(step)
    )
    logger.debug(
        "t=%.2f d=%.3f corridor=[%.6f, %.6f] reference=%.6f",
        t,
        distance,
        bounds.lower,
        bounds.upper,
        reference.value,
    )
    return TimeSeriesRow(
        t=t,
        ego_pose=ego,
        object_position=obj,
        distance=distance,
        sigma1=sigma1,
        sigma2=sigma2,
        poc_lower=bounds.lower,
        poc_upper=bounds.upper,
        delta=bounds.delta,
        poc_mcs_rect=reference.value,
        mcs_samples=config.mcs_samples,
    )


def run_scenario(config: ScenarioConfig, max_workers: int | None = None) -> list[TimeSeriesRow]:
    """Evaluate the corridor and the rectangle reference at t = 0, dt, ..., horizon.

    Both actors are propagated from their initial states directly to each step time, so rows are
    independent and may be computed on a thread pool; the result is always ordered by time.
    """
    steps = range(config.n_steps)
    logger.debug("Running %s over %d steps", config.name, config.n_steps)
    if max_workers is None or max_workers <= 1:
        rows = [_row(config, step) for step in steps]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(lambda step: _row(config, step), steps))
    summary = summarize(rows)
    logger.info(
        "%s: max POC %.4f at t=%.2f (d=%.3f), max corridor width %.4f",
        config.name,
        summary.max_upper,
        summary.max_upper_time,
        summary.max_upper_distance,
        summary.max_delta,
    )
    if summary.corridor_violations:
        logger.warning("%s: %d steps with the reference outside the corridor", config.name, summary.corridor_violations)
    return rows


def summarize(rows: list[TimeSeriesRow]) -> ScenarioSummary:
    if not rows:
        raise ValueError("Cannot summarize an empty time series")
    peak = max(rows, key=lambda row: row.poc_upper)
    widest = max(rows, key=lambda row: row.delta)
    return ScenarioSummary(
        max_upper=peak.poc_upper,
        max_upper_time=peak.t,
        max_upper_distance=peak.distance,
        max_delta=widest.delta,
        max_delta_time=widest.t,
        corridor_violations=sum(not row.within_corridor() for row in rows),
    )


_INTERSECTION_UNCERTAINTY = UncertaintyModel(steepness=6.0, midpoint_distance=1.0, sigma_max_1=2.0, sigma_max_2=5.0)
_EGO_SHAPE = RectangleFootprint(length=4.5, width=2.0)


def scenario_a() -> ScenarioConfig:
    """Object crossing the ego path so that both reach (4, 4) at t = 4 s"""
    return ScenarioConfig(
        name="scenario-a",
        ego=ActorState(Pose(Vec2(0.0, 4.0), 0.0), speed=1.0),
        object=ActorState(Pose(Vec2(4.0, 0.0), math.pi / 2), speed=1.0),
        ego_shape=_EGO_SHAPE,
        object_radius=2.0,
        uncertainty=_INTERSECTION_UNCERTAINTY,
    )


def scenario_b() -> ScenarioConfig:
    """A faster object starting further down the crossing road, passing just ahead of the ego"""
    return ScenarioConfig(
        name="scenario-b",
        ego=ActorState(Pose(Vec2(0.0, 4.0), 0.0), speed=1.0),
        object=ActorState(Pose(Vec2(6.0, 0.0), math.pi / 2), speed=1.5),
        ego_shape=_EGO_SHAPE,
        object_radius=2.0,
        uncertainty=_INTERSECTION_UNCERTAINTY,
    )
