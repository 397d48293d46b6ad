"""Micro-benchmark of the single-circle estimators on one fixed case.

Every timed call starts from world coordinates, so the transformation into the evaluation frame is
part of the measured time.
"""

import itertools
import time
from collections.abc import Callable
from dataclasses import dataclass

from circlepoc.circle import (
    DEFAULT_MCS_SAMPLES,
    CollisionDisc,
    PocMethod,
    PocResult,
    poc_global_double,
    poc_global_single,
    poc_local_double,
    poc_local_single,
    poc_mcs,
    poc_polar,
)
from circlepoc.gaussian import DEFAULT_QUADRATURE, DiagGaussian2, QuadratureSpec, RandomSeed
from circlepoc.geometry import Pose, RectangleFootprint, Vec2, cover_arrangement
from circlepoc.log import get_logger

__all__ = [
    "BENCH_METHODS",
    "DEFAULT_REPETITIONS",
    "DEFAULT_WARMUP",
    "BenchCase",
    "BenchReport",
    "BenchRow",
    "bench_methods",
]

logger = get_logger(__name__)

DEFAULT_REPETITIONS = 10_000
DEFAULT_WARMUP = 100
MIN_REPETITIONS = 100

BENCH_METHODS = (
    PocMethod.MCS,
    PocMethod.LOCAL_DOUBLE,
    PocMethod.LOCAL_SINGLE,
    PocMethod.GLOBAL_DOUBLE,
    PocMethod.GLOBAL_SINGLE,
    PocMethod.POLAR,
)


@dataclass(frozen=True, eq=True)
class BenchCase:
    ego: Pose
    object_mean: Vec2
    sigma1: float
    sigma2: float
    r_e: float
    r_o: float

    def __post_init__(self) -> None:
        if self.ego.heading != 0.0:
            raise ValueError("The offset-circle estimators need an ego frame aligned with the world axes")
        DiagGaussian2(self.object_mean, self.sigma1, self.sigma2)
        CollisionDisc.from_radii(self.r_e, self.r_o)

    @classmethod
    def default_case(cls) -> "BenchCase":
        """Two-circle cover of a 4.5 x 2 m car against a 2 m object offset by (1, 1)"""
        r_e = cover_arrangement(RectangleFootprint(4.5, 2.0), 2).radius
        ego = Pose(Vec2(12.0, -3.0))
        return cls(ego=ego, object_mean=ego.position + Vec2(1.0, 1.0), sigma1=1.0, sigma2=2.0, r_e=r_e, r_o=2.0)

    @property
    def disc(self) -> CollisionDisc:
        return CollisionDisc.from_radii(self.r_e, self.r_o)


@dataclass(frozen=True, eq=True)
class BenchRow:
    method: PocMethod
    mean_ms: float
    repetitions: int
    value: float
    error_estimate: float = 0.0


@dataclass(frozen=True, eq=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    warmup: int

    def __post_init__(self) -> None:
        for row in self.rows:
            if row.repetitions < 1 or not row.mean_ms > 0:
                raise ValueError(f"Invalid timing for {row.method.value}: {row.mean_ms} ms over {row.repetitions}")

    @property
    def reduced_quality(self) -> bool:
        return any(row.repetitions < DEFAULT_REPETITIONS for row in self.rows)

    def row(self, method: PocMethod) -> BenchRow:
        for row in self.rows:
            if row.method is method:
                return row
        raise KeyError(method.value)

    def max_deviation(self, methods: tuple[PocMethod, ...] | None = None) -> float:
        values = [row.value for row in self.rows if methods is None or row.method in methods]
        return max((abs(a - b) for a, b in itertools.combinations(values, 2)), default=0.0)

    def as_table(self) -> str:
        header = ("method", "mean [ms]", "repetitions", "value")
        body = [(row.method.value, f"{row.mean_ms:.4f}", str(row.repetitions), f"{row.value:.6f}") for row in self.rows]
        widths = [max(len(line[index]) for line in (header, *body)) for index in range(len(header))]
        lines = [
            "  ".join(cell.ljust(width) for cell, width in zip(line, widths, strict=True)) for line in (header, *body)
        ]
        lines.insert(1, "  ".join("-" * width for width in widths))
        if self.reduced_quality:
            lines.append(f"reduced statistical quality: fewer than {DEFAULT_REPETITIONS} repetitions")
        return "\n".join(lines)


def _calls(case: BenchCase, n_mcs: int, spec: QuadratureSpec) -> dict[PocMethod, Callable[[], PocResult]]:
    disc = case.disc
    seed = RandomSeed()

    def local() -> DiagGaussian2:
        return DiagGaussian2(case.ego.to_body(case.object_mean), case.sigma1, case.sigma2)

    return {
        PocMethod.MCS: lambda: poc_mcs(disc, local(), n_mcs, seed),
        PocMethod.LOCAL_DOUBLE: lambda: poc_local_double(disc, local(), spec),
        PocMethod.LOCAL_SINGLE: lambda: poc_local_single(disc, local(), spec),
        PocMethod.GLOBAL_DOUBLE: lambda: poc_global_double(
            disc, case.ego.position, case.object_mean, case.sigma1, case.sigma2, spec
        ),
        PocMethod.GLOBAL_SINGLE: lambda: poc_global_single(
            disc, case.ego.position, case.object_mean, case.sigma1, case.sigma2, spec
        ),
        PocMethod.POLAR: lambda: poc_polar(disc, local(), spec),
    }


def bench_methods(
    case: BenchCase,
    repetitions: int = DEFAULT_REPETITIONS,
    n_mcs: int = DEFAULT_MCS_SAMPLES,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    warmup: int = DEFAULT_WARMUP,
    methods: tuple[PocMethod, ...] = BENCH_METHODS,
) -> BenchReport:
    """Mean wall-clock time per call of each estimator, after `warmup` untimed calls"""
    if repetitions < MIN_REPETITIONS:
        raise ValueError(f"At least {MIN_REPETITIONS} repetitions are required, got {repetitions}")
    if warmup < 0:
        raise ValueError(f"Warm-up iterations must be non-negative, got {warmup}")
    if repetitions < DEFAULT_REPETITIONS:
        logger.warning("Benchmarking with %d repetitions, timings have reduced statistical quality", repetitions)
    calls = _calls(case, n_mcs, spec)
    rows = []
    for method in methods:
        call = calls[method]
        for _ in range(warmup):
            call()
        start = time.perf_counter_ns()
        for _ in range(repetitions):
            result = call()
        elapsed = time.perf_counter_ns() - start
        row = BenchRow(method, elapsed / repetitions / 1e6, repetitions, result.value, result.error_estimate)
        logger.info("%-13s %10.4f ms/call  value %.6f", method.value, row.mean_ms, row.value)
        rows.append(row)
    return BenchReport(tuple(rows), warmup)
