"""Inclusion-exclusion POC for an ego rectangle covered by a grid of circles, and the error corridor.

The union of the collision discs is evaluated as

    sum(circle terms) - sum(lens terms) + sum(overlap terms)

where lenses are the pairwise intersections of grid-adjacent discs and overlaps the intersections of
the four discs around each grid cell. Terms are independent, so they may run on a thread pool; the
summation order is fixed by the arrangement order so results do not depend on scheduling.
"""

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import special

from circlepoc.circle import SQRT2, CollisionDisc, ProbabilityRangeError, poc_local_single
from circlepoc.gaussian import (
    DEFAULT_QUADRATURE,
    DiagGaussian2,
    FloatArray,
    QuadratureSpec,
    integrate_1d,
    interval_mass,
    support,
)
from circlepoc.geometry import (
    AXIS_X,
    CoverArrangement,
    CoverMode,
    GeometryError,
    LensGeometry,
    OverlapRegion,
    RectangleFootprint,
    arrangement_lenses,
    cover_arrangement,
    inscribed_two_circles,
    lens_geometry,
    lens_half_widths,
    overlap_regions,
)
from circlepoc.log import get_logger

__all__ = [
    "MIN_LENS_HALF_HEIGHT",
    "ArrangementError",
    "BoundsResult",
    "MultiCircleBreakdown",
    "lens_overlap_counts",
    "poc_bounds",
    "poc_lens",
    "poc_multi_axis",
    "poc_overlap",
    "poc_single_axis",
    "poc_two_circles",
    "poc_upper",
]

logger = get_logger(__name__)

# Lenses thinner than this are below quadrature resolution and contribute nothing
MIN_LENS_HALF_HEIGHT = 1e-9

# Splitting this close to the lens tips isolates the square-root kink of the arc bounds
EDGE_SPLIT = 1e-6


class ArrangementError(GeometryError): ...


@dataclass(frozen=True, eq=True)
class MultiCircleBreakdown:
    circle_terms: tuple[float, ...]
    lens_terms: tuple[float, ...]
    overlap_terms: tuple[float, ...]
    total: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.total <= 1.0:
            raise ProbabilityRangeError(f"Inclusion-exclusion total {self.total} lies outside [0, 1]")


@dataclass(frozen=True, eq=True)
class BoundsResult:
    lower: float
    upper: float
    delta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise ProbabilityRangeError(f"Bounds must satisfy 0 <= {self.lower} <= {self.upper} <= 1")
        if not math.isclose(self.delta, self.upper - self.lower, abs_tol=1e-15):
            raise ValueError(f"Corridor width {self.delta} does not match {self.upper - self.lower}")

    @classmethod
    def from_bounds(cls, lower: float, upper: float) -> "BoundsResult":
        return cls(lower, upper, upper - lower)


def lens_overlap_counts(n_circles: int, n_axes: int) -> tuple[int, int]:
    """Number of lenses N_c (2 - 1 / N_a) - N_a and of quadruple overlaps (N_c / N_a - 1)(N_a - 1)"""
    if n_circles < 1 or n_axes < 1 or n_circles % n_axes:
        raise ArrangementError(f"{n_circles} circles cannot be split evenly over {n_axes} axes")
    per_axis = n_circles // n_axes
    return 2 * n_circles - per_axis - n_axes, (per_axis - 1) * (n_axes - 1)


def poc_lens(lens: LensGeometry, g: DiagGaussian2, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that the object center lies in both collision discs of the lens.

    In the lens frame (origin at the midpoint, first axis joining the centers) the outer integral runs
    over the perpendicular offset t and the axial extent [-d_l(t), d_l(t)] is integrated with erf.
    """
    if lens.half_height < MIN_LENS_HALF_HEIGHT:
        return 0.0
    local = g.shifted(lens.midpoint)
    if lens.lateral:
        local = local.swapped()
    mu_axis, sigma_axis = local.mean.x, local.sigma1
    mu_perp, sigma_perp = local.mean.y, local.sigma2
    lower, upper = support(-lens.half_height, lens.half_height, mu_perp, sigma_perp)
    if not lower < upper:
        return 0.0
    prefactor = 1.0 / (2.0 * math.sqrt(2.0 * math.pi) * sigma_perp)

    def integrand(t: FloatArray) -> FloatArray:
        half = lens_half_widths(lens, t)
        gauss = np.exp(-((t - mu_perp) ** 2) / (2.0 * sigma_perp * sigma_perp))
        result: FloatArray = (
            prefactor
            * gauss
            * (
                special.erf((half - mu_axis) / (sigma_axis * SQRT2))
                + special.erf((half + mu_axis) / (sigma_axis * SQRT2))
            )
        )
        return result

    edge = lens.half_height * (1.0 - EDGE_SPLIT)
    points = [point for point in (-edge, edge, mu_perp) if lower < point < upper]
    return _clamp(integrate_1d(integrand, lower, upper, spec, points=points).value, spec, "lens")


def poc_overlap(region: OverlapRegion, g: DiagGaussian2, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that the object center lies in all four collision discs of a grid cell.

    For each ordinate y the feasible abscissae are [max of the lower arc bounds, min of the upper ones],
    integrated in closed form; the outer integral is restricted to ordinates where that is non-empty.
    """
    reach = region.half_height
    if reach < MIN_LENS_HALF_HEIGHT:
        return 0.0
    middle = region.midpoint.y
    lower, upper = support(middle - reach, middle + reach, g.mean.y, g.sigma2)
    if not lower < upper:
        return 0.0
    centers_x = np.array([center.x for center in region.centers])[:, None]
    centers_y = np.array([center.y for center in region.centers])[:, None]
    radius_sq = region.collision_radius**2
    prefactor = 1.0 / (math.sqrt(2.0 * math.pi) * g.sigma2)

    def integrand(y: FloatArray) -> FloatArray:
        half = np.sqrt(np.clip(radius_sq - (y[None, :] - centers_y) ** 2, 0.0, None))
        left = (centers_x - half).max(axis=0)
        right = (centers_x + half).min(axis=0)
        gauss = np.exp(-((y - g.mean.y) ** 2) / (2.0 * g.sigma2 * g.sigma2))
        result: FloatArray = prefactor * gauss * interval_mass(left, right, g.mean.x, g.sigma1)
        return result

    edge = reach * (1.0 - EDGE_SPLIT)
    points = [point for point in (middle - edge, middle, middle + edge, g.mean.y) if lower < point < upper]
    return _clamp(integrate_1d(integrand, lower, upper, spec, points=points).value, spec, "overlap")


def _clamp(value: float, spec: QuadratureSpec, label: str, scale: int = 1) -> float:
    slack = scale * spec.tolerance(value)
    if value < -slack or value > 1.0 + slack:
        raise ProbabilityRangeError(f"{label} probability {value} lies outside [0, 1]", value=value)
    return min(max(value, 0.0), 1.0)


def _circle_term(local: DiagGaussian2, disc: CollisionDisc, spec: QuadratureSpec) -> float:
    return poc_local_single(disc, local, spec).value


def _evaluate(tasks: list[Callable[[], float]], max_workers: int | None) -> list[float]:
    if max_workers is None or max_workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda task: task(), tasks))


def _breakdown(
    arr: CoverArrangement,
    r_o: float,
    g: DiagGaussian2,
    spec: QuadratureSpec,
    lenses: list[LensGeometry],
    overlaps: list[OverlapRegion],
    max_workers: int | None,
) -> MultiCircleBreakdown:
    disc = CollisionDisc.from_radii(arr.radius, r_o)
    tasks: list[Callable[[], float]] = [partial(_circle_term, g.shifted(center), disc, spec) for center in arr.centers]
    tasks.extend(partial(poc_lens, lens, g, spec) for lens in lenses)
    tasks.extend(partial(poc_overlap, region, g, spec) for region in overlaps)
    values = _evaluate(tasks, max_workers)
    circle_terms = tuple(values[: arr.n_circles])
    lens_terms = tuple(values[arr.n_circles : arr.n_circles + len(lenses)])
    overlap_terms = tuple(values[arr.n_circles + len(lenses) :])
    total = math.fsum(circle_terms) - math.fsum(lens_terms) + math.fsum(overlap_terms)
    logger.debug(
        "%d circles, %d lenses, %d overlaps -> %.9g", len(circle_terms), len(lens_terms), len(overlap_terms), total
    )
    return MultiCircleBreakdown(
        circle_terms=circle_terms,
        lens_terms=lens_terms,
        overlap_terms=overlap_terms,
        total=_clamp(total, spec, "inclusion-exclusion", scale=len(values)),
    )


def _axial_lenses(arr: CoverArrangement, r_o: float) -> list[LensGeometry]:
    if arr.axial_spacing >= 2.0 * (arr.radius + r_o):
        # only reachable for inscribed pairs on long footprints: the discs are disjoint
        return []
    return [
        lens_geometry(arr.radius, r_o, arr.axial_spacing, (first + second) * 0.5, AXIS_X)
        for first, second in zip(arr.centers, arr.centers[1:], strict=False)
    ]


def poc_two_circles(
    arr: CoverArrangement, r_o: float, g: DiagGaussian2, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> MultiCircleBreakdown:
    """P(first disc) + P(second disc) - P(lens); works for covering and inscribed pairs alike"""
    if arr.n_circles != 2 or arr.n_axes != 1:
        raise ArrangementError(f"Expected 2 circles on 1 axis, got {arr.n_circles} on {arr.n_axes}")
    return _breakdown(arr, r_o, g, spec, _axial_lenses(arr, r_o), [], None)


def poc_single_axis(
    arr: CoverArrangement,
    r_o: float,
    g: DiagGaussian2,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    max_workers: int | None = None,
) -> MultiCircleBreakdown:
    """Collinear discs: every point of the union lies in a consecutive run of discs, so subtracting
    the lenses of consecutive pairs counts it exactly once."""
    if arr.n_axes != 1:
        raise ArrangementError(f"Expected a single axis, got {arr.n_axes}")
    if arr.mode is not CoverMode.COVER:
        raise ArrangementError("Single-axis evaluation expects a covering arrangement")
    return _breakdown(arr, r_o, g, spec, _axial_lenses(arr, r_o), [], max_workers)


def poc_multi_axis(
    arr: CoverArrangement,
    r_o: float,
    g: DiagGaussian2,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    max_workers: int | None = None,
) -> MultiCircleBreakdown:
    if arr.mode is not CoverMode.COVER:
        raise ArrangementError("Multi-axis evaluation expects a covering arrangement")
    collision_radius = arr.radius + r_o
    if arr.axis_spacing > 2.0 * collision_radius:
        raise ArrangementError(
            f"Axis spacing {arr.axis_spacing} exceeds the collision diameter {2.0 * collision_radius}"
        )
    if arr.n_axes == 1:
        return poc_single_axis(arr, r_o, g, spec, max_workers=max_workers)
    lenses = arrangement_lenses(arr, r_o)
    overlaps = overlap_regions(arr, r_o)
    expected = lens_overlap_counts(arr.n_circles, arr.n_axes)
    if (len(lenses), len(overlaps)) != expected:
        raise ArrangementError(f"Enumerated {len(lenses)} lenses / {len(overlaps)} overlaps, expected {expected}")
    return _breakdown(arr, r_o, g, spec, lenses, overlaps, max_workers)


def poc_upper(
    rect: RectangleFootprint,
    r_o: float,
    g: DiagGaussian2,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    n_circles: int = 2,
    n_axes: int = 1,
) -> MultiCircleBreakdown:
    """Over-approximation through circles covering the rectangle"""
    arr = cover_arrangement(rect, n_circles, n_axes, object_radius=r_o)
    if n_circles == 2 and n_axes == 1:
        return poc_two_circles(arr, r_o, g, spec)
    return poc_multi_axis(arr, r_o, g, spec)


def poc_bounds(
    rect: RectangleFootprint,
    r_o: float,
    g: DiagGaussian2,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    n_circles: int = 2,
    n_axes: int = 1,
) -> BoundsResult:
    """Corridor between the inscribed-pair and the covering-arrangement POC"""
    upper = poc_upper(rect, r_o, g, spec, n_circles=n_circles, n_axes=n_axes).total
    lower = poc_two_circles(inscribed_two_circles(rect), r_o, g, spec).total
    if lower > upper:
        # inscribed discs lie inside the covering union, so only quadrature noise gets here
        if lower - upper > 6 * spec.tolerance(upper):
            raise ProbabilityRangeError(f"Lower bound {lower} exceeds upper bound {upper}", value=lower)
        lower = upper
    return BoundsResult.from_bounds(lower, upper)
