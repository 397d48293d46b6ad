from .bench import BenchCase, BenchReport, BenchRow, bench_methods
from .circle import (
    CollisionDisc,
    PocMethod,
    PocResult,
    ProbabilityRangeError,
    poc_global_double,
    poc_global_single,
    poc_local_double,
    poc_local_single,
    poc_mcs,
    poc_polar,
    poc_rectangle_mcs,
)
from .config import ConfigError, dump_scenario_config, load_scenario_config
from .export import BenchCSVExporter, ScenarioCSVExporter, ScenarioJSONExporter, read_scenario_csv
from .gaussian import DiagGaussian2, QuadratureError, QuadratureSpec, RandomSeed, integrate_1d, integrate_2d
from .geometry import (
    Circle,
    CoverArrangement,
    CoverMode,
    GeometryError,
    LensGeometry,
    OverlapRegion,
    Pose,
    RectangleFootprint,
    Vec2,
    cover_arrangement,
    inscribed_two_circles,
)
from .multicircle import (
    ArrangementError,
    BoundsResult,
    MultiCircleBreakdown,
    lens_overlap_counts,
    poc_bounds,
    poc_lens,
    poc_multi_axis,
    poc_overlap,
    poc_single_axis,
    poc_two_circles,
    poc_upper,
)
from .scenario import (
    ActorState,
    ScenarioConfig,
    ScenarioSummary,
    TimeSeriesRow,
    UncertaintyModel,
    run_scenario,
    scenario_a,
    scenario_b,
    summarize,
)

__all__ = [
    "ActorState",
    "ArrangementError",
    "BenchCSVExporter",
    "BenchCase",
    "BenchReport",
    "BenchRow",
    "BoundsResult",
    "Circle",
    "CollisionDisc",
    "ConfigError",
    "CoverArrangement",
    "CoverMode",
    "DiagGaussian2",
    "GeometryError",
    "LensGeometry",
    "MultiCircleBreakdown",
    "OverlapRegion",
    "PocMethod",
    "PocResult",
    "Pose",
    "ProbabilityRangeError",
    "QuadratureError",
    "QuadratureSpec",
    "RandomSeed",
    "RectangleFootprint",
    "ScenarioCSVExporter",
    "ScenarioConfig",
    "ScenarioJSONExporter",
    "ScenarioSummary",
    "TimeSeriesRow",
    "UncertaintyModel",
    "Vec2",
    "bench_methods",
    "cover_arrangement",
    "dump_scenario_config",
    "inscribed_two_circles",
    "integrate_1d",
    "integrate_2d",
    "lens_overlap_counts",
    "load_scenario_config",
    "poc_bounds",
    "poc_global_double",
    "poc_global_single",
    "poc_lens",
    "poc_local_double",
    "poc_local_single",
    "poc_mcs",
    "poc_multi_axis",
    "poc_overlap",
    "poc_polar",
    "poc_rectangle_mcs",
    "poc_single_axis",
    "poc_two_circles",
    "poc_upper",
    "read_scenario_csv",
    "run_scenario",
    "scenario_a",
    "scenario_b",
    "summarize",
]
