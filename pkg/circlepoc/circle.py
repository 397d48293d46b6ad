"""Probability of collision between one ego circle and one Gaussian-distributed object circle.

Every estimator works on the collision disc of radius R = r_e + r_o: the object collides with the ego
circle iff its center falls inside that disc. Local estimators expect the density in the frame
centered on the ego circle, global ones take world coordinates of an ego frame that is axis-aligned
with the world.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy import special

from circlepoc.gaussian import (
    DEFAULT_QUADRATURE,
    DEFAULT_SEED,
    SUPPORT_SIGMAS,
    DiagGaussian2,
    FloatArray,
    QuadratureError,
    QuadratureResult,
    QuadratureSpec,
    RandomSeed,
    integrate_1d,
    integrate_2d,
    pdf_many,
    sample,
    sample_array,
    support,
)
from circlepoc.geometry import (
    ORIGIN,
    Pose,
    RectangleFootprint,
    Vec2,
    collision_indicator,
    rectangle_circle_indicator_many,
)
from circlepoc.log import get_logger

__all__ = [
    "DEFAULT_MCS_SAMPLES",
    "CollisionDisc",
    "PocMethod",
    "PocResult",
    "ProbabilityRangeError",
    "poc_global_double",
    "poc_global_single",
    "poc_local_double",
    "poc_local_single",
    "poc_mcs",
    "poc_polar",
    "poc_rectangle_mcs",
    "to_probability",
]

logger = get_logger(__name__)

DEFAULT_MCS_SAMPLES = 10_000

SQRT2 = math.sqrt(2.0)


class ProbabilityRangeError(QuadratureError): ...


class PocMethod(str, Enum):
    MCS = "mcs"
    LOCAL_DOUBLE = "local_double"
    LOCAL_SINGLE = "local_single"
    GLOBAL_DOUBLE = "global_double"
    GLOBAL_SINGLE = "global_single"
    POLAR = "polar"
    RECTANGLE_MCS = "rectangle_mcs"


@dataclass(frozen=True, eq=True)
class PocResult:
    value: float
    method: PocMethod
    error_estimate: float = 0.0
    samples_used: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ProbabilityRangeError(f"{self.method.value} produced {self.value}, outside [0, 1]")
        if not self.error_estimate >= 0:
            raise ValueError(f"Error estimate must be non-negative, got {self.error_estimate}")


@dataclass(frozen=True, eq=True)
class CollisionDisc:
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"Collision radius must be positive, got {self.radius}")

    @classmethod
    def from_radii(cls, r_e: float, r_o: float) -> "CollisionDisc":
        return cls(r_e + r_o)


def to_probability(result: QuadratureResult, spec: QuadratureSpec, method: PocMethod) -> PocResult:
    """Clamp quadrature overshoot within tolerance into [0, 1]; anything larger is a failure"""
    value, error = result
    slack = spec.tolerance(value) + error
    if value < -slack or value > 1.0 + slack:
        raise ProbabilityRangeError(
            f"{method.value} produced {value} (error estimate {error:.3g}), outside [0, 1]",
            value=value,
            error_estimate=error,
        )
    clamped = min(max(value, 0.0), 1.0)
    if clamped != value:
        logger.debug("Clamping %s result %.17g into [0, 1]", method.value, value)
    return PocResult(clamped, method, error + abs(clamped - value))


def _chord_angles(lower: float, upper: float, center: float, radius: float) -> tuple[float, float]:
    """Angles theta with `center + radius * sin(theta)` at the ends of [lower, upper] inside the disc"""
    return (
        math.asin(min(max((lower - center) / radius, -1.0), 1.0)),
        math.asin(min(max((upper - center) / radius, -1.0), 1.0)),
    )


def _peak_angles(lower: float, upper: float, center: float, radius: float, peak: float) -> list[float]:
    if not abs(peak - center) < radius:
        return []
    angle = math.asin((peak - center) / radius)
    return [angle] if lower < angle < upper else []


def poc_mcs(
    disc: CollisionDisc, g: DiagGaussian2, n_samples: int = DEFAULT_MCS_SAMPLES, seed: RandomSeed = DEFAULT_SEED
) -> PocResult:
    """Fraction of sampled object centers for which the indicator fires, sample by sample"""
    hits = sum(collision_indicator(ORIGIN, position, disc.radius, 0.0) for position in sample(g, seed, n_samples))
    value = hits / n_samples
    return PocResult(
        value=value,
        method=PocMethod.MCS,
        error_estimate=math.sqrt(value * (1.0 - value) / n_samples),
        samples_used=n_samples,
    )


def _double_integral(
    disc: CollisionDisc, center: Vec2, g: DiagGaussian2, spec: QuadratureSpec, method: PocMethod
) -> PocResult:
    """Density over the disc around `center`, outer ordinate c2 = center.y + R sin(theta), inner abscissa c1"""
    radius = disc.radius
    lower, upper = support(center.y - radius, center.y + radius, g.mean.y, g.sigma2)
    if not lower < upper:
        return PocResult(0.0, method)
    low_angle, high_angle = _chord_angles(lower, upper, center.y, radius)
    reach = SUPPORT_SIGMAS * g.sigma1

    def chord(theta: FloatArray) -> tuple[FloatArray, FloatArray]:
        half = radius * np.cos(theta)
        return np.maximum(center.x - half, g.mean.x - reach), np.minimum(center.x + half, g.mean.x + reach)

    def density(theta: FloatArray, c1: FloatArray) -> FloatArray:
        result: FloatArray = pdf_many(g, c1, center.y + radius * np.sin(theta)) * (radius * np.cos(theta))
        return result

    points = _peak_angles(low_angle, high_angle, center.y, radius, g.mean.y)
    result = integrate_2d(density, (low_angle, high_angle), chord, spec, points=points)
    return to_probability(result, spec, method)


def _single_integral(
    disc: CollisionDisc, center: Vec2, g: DiagGaussian2, spec: QuadratureSpec, method: PocMethod
) -> PocResult:
    radius = disc.radius
    s1, s2 = g.sigma1, g.sigma2
    offset = g.mean.x - center.x
    lower, upper = support(center.y - radius, center.y + radius, g.mean.y, s2)
    if not lower < upper:
        return PocResult(0.0, method)
    low_angle, high_angle = _chord_angles(lower, upper, center.y, radius)
    prefactor = 1.0 / (2.0 * math.sqrt(2.0 * math.pi) * s2)

    def integrand(theta: FloatArray) -> FloatArray:
        # c2 = center.y + R sin(theta); the half chord R cos(theta) is also the Jacobian
        half = radius * np.cos(theta)
        gauss = np.exp(-((center.y + radius * np.sin(theta) - g.mean.y) ** 2) / (2.0 * s2 * s2))
        chord_mass = special.erf((half - offset) / (s1 * SQRT2)) + special.erf((half + offset) / (s1 * SQRT2))
        result: FloatArray = prefactor * gauss * chord_mass * half
        return result

    points = _peak_angles(low_angle, high_angle, center.y, radius, g.mean.y)
    result = integrate_1d(integrand, low_angle, high_angle, spec, points=points)
    return to_probability(result, spec, method)


def poc_local_double(disc: CollisionDisc, g: DiagGaussian2, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> PocResult:
    return _double_integral(disc, ORIGIN, g, spec, PocMethod.LOCAL_DOUBLE)


def poc_local_single(disc: CollisionDisc, g: DiagGaussian2, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> PocResult:
    """Outer integral over c2, the chord through the disc at c2 integrated in closed form with erf.

    The outer variable is the angle theta with c2 = R sin(theta), which keeps the integrand smooth up
    to the edge of the disc.
    """
    return _single_integral(disc, ORIGIN, g, spec, PocMethod.LOCAL_SINGLE)


def poc_global_single(
    disc: CollisionDisc,
    ego_pos: Vec2,
    obj_mean_global: Vec2,
    sigma1: float,
    sigma2: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> PocResult:
    """The offset-circle form: integrate over world ordinates of the disc shifted to the ego position"""
    return _single_integral(
        disc, ego_pos, DiagGaussian2(obj_mean_global, sigma1, sigma2), spec, PocMethod.GLOBAL_SINGLE
    )


def poc_global_double(
    disc: CollisionDisc,
    ego_pos: Vec2,
    obj_mean_global: Vec2,
    sigma1: float,
    sigma2: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> PocResult:
    return _double_integral(
        disc, ego_pos, DiagGaussian2(obj_mean_global, sigma1, sigma2), spec, PocMethod.GLOBAL_DOUBLE
    )


def _quadrant_range(mean: float, sigma: float) -> tuple[float, float]:
    """Support of a N(mean, sigma^2) coordinate restricted to non-negative values"""
    return max(0.0, mean - SUPPORT_SIGMAS * sigma), mean + SUPPORT_SIGMAS * sigma


def poc_polar(disc: CollisionDisc, g: DiagGaussian2, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> PocResult:
    """Outer integral over the radius, inner over the angle, of rho * p(phi, rho).

    The plane is split into quadrants. In each one the radius and the angle at every radius are
    clipped to the support box of the density, axis by axis, so narrow anisotropic densities are
    never stepped over.
    """
    radius = disc.radius
    s1, s2 = g.sigma1, g.sigma2
    mean_distance = math.hypot(g.mean.x, g.mean.y)
    mean_angle = math.atan2(g.mean.y, g.mean.x)
    normalizer = 1.0 / (2.0 * math.pi * s1 * s2)
    quadrant_spec = replace(spec, abs_tol=spec.abs_tol / 4)
    results: list[QuadratureResult] = []
    for sign_x, sign_y in ((1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)):
        x_low, x_high = _quadrant_range(sign_x * g.mean.x, g.sigma1)
        y_low, y_high = _quadrant_range(sign_y * g.mean.y, g.sigma2)
        lower, upper = math.hypot(x_low, y_low), min(radius, math.hypot(x_high, y_high))
        if not (x_low < x_high and y_low < y_high and lower < upper):
            continue

        def arc(
            rho: FloatArray, x_low: float = x_low, x_high: float = x_high, y_low: float = y_low, y_high: float = y_high
        ) -> tuple[FloatArray, FloatArray]:
            # alpha runs from the x axis to the y axis of the quadrant
            start = np.maximum(np.arccos(np.minimum(x_high / rho, 1.0)), np.arcsin(np.minimum(y_low / rho, 1.0)))
            end = np.minimum(np.arccos(np.minimum(x_low / rho, 1.0)), np.arcsin(np.minimum(y_high / rho, 1.0)))
            return start, end

        def density(rho: FloatArray, alpha: FloatArray, sign_x: float = sign_x, sign_y: float = sign_y) -> FloatArray:
            d1 = sign_x * rho * np.cos(alpha) - mean_distance * math.cos(mean_angle)
            d2 = sign_y * rho * np.sin(alpha) - mean_distance * math.sin(mean_angle)
            result: FloatArray = rho * normalizer * np.exp(-(d1 * d1) / (2.0 * s1 * s1) - (d2 * d2) / (2.0 * s2 * s2))
            return result

        mean_x, mean_y = sign_x * g.mean.x, sign_y * g.mean.y
        kinks = (x_low, x_high, y_low, y_high, mean_x, mean_y, math.hypot(x_low, y_high), math.hypot(x_high, y_low))
        points = sorted({point for point in kinks if lower < point < upper})
        results.append(integrate_2d(density, (lower, upper), arc, quadrant_spec, points=points))
    if not results:
        return PocResult(0.0, PocMethod.POLAR)
    total = QuadratureResult(math.fsum(r.value for r in results), math.fsum(r.error_estimate for r in results))
    return to_probability(total, spec, PocMethod.POLAR)


def poc_rectangle_mcs(
    rect: RectangleFootprint,
    r_o: float,
    g: DiagGaussian2,
    n_samples: int = DEFAULT_MCS_SAMPLES,
    seed: RandomSeed = DEFAULT_SEED,
) -> PocResult:
    """Monte Carlo POC of the exact rectangle footprint, with `g` in the ego body frame"""
    hits = rectangle_circle_indicator_many(Pose(ORIGIN), rect, sample_array(g, seed, n_samples), r_o)
    value = float(np.count_nonzero(hits)) / n_samples
    return PocResult(
        value=value,
        method=PocMethod.RECTANGLE_MCS,
        error_estimate=math.sqrt(value * (1.0 - value) / n_samples),
        samples_used=n_samples,
    )
