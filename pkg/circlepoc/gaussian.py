"""Diagonal bivariate Gaussian, seeded sampling and the adaptive quadrature engine.

Integrands passed to `integrate_1d` are vectorised: they receive a float64 array of abscissae and
return an array of the same shape.
"""

import heapq
import itertools
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy import special

from circlepoc.geometry import Vec2
from circlepoc.log import get_logger

__all__ = [
    "DEFAULT_QUADRATURE",
    "DEFAULT_SEED",
    "SUPPORT_SIGMAS",
    "DiagGaussian2",
    "FloatArray",
    "QuadratureError",
    "QuadratureResult",
    "QuadratureSpec",
    "RandomSeed",
    "erf",
    "integrate_1d",
    "integrate_2d",
    "interval_mass",
    "pdf",
    "pdf_many",
    "sample",
    "sample_array",
    "support",
]

logger = get_logger(__name__)

FloatArray = NDArray[np.float64]
Integrand = Callable[[FloatArray], FloatArray]
Integrand2D = Callable[[FloatArray, FloatArray], FloatArray]
BoundsFunction = Callable[[FloatArray], tuple[FloatArray, FloatArray]]
Bounds = tuple[float, float]

# Mass beyond 10 sigma is below 1e-22; integration ranges are clipped to this support
SUPPORT_SIGMAS = 10.0

# Gauss-Kronrod 7/15 pair on [-1, 1]
_KRONROD_NODES = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_KRONROD_WEIGHTS = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_GAUSS_WEIGHTS = np.array(
    [
        0.0,
        0.129484966168869693270611432679082,
        0.0,
        0.279705391489276667901467771423780,
        0.0,
        0.381830050505118944950369775488975,
        0.0,
        0.417959183673469387755102040816327,
    ]
)
NODES = np.concatenate((-_KRONROD_NODES[:-1], _KRONROD_NODES[::-1]))
KRONROD = np.concatenate((_KRONROD_WEIGHTS[:-1], _KRONROD_WEIGHTS[::-1]))
GAUSS = np.concatenate((_GAUSS_WEIGHTS[:-1], _GAUSS_WEIGHTS[::-1]))


class QuadratureError(ValueError):
    def __init__(self, message: str, value: float = math.nan, error_estimate: float = math.inf) -> None:
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


@dataclass(frozen=True, eq=True)
class DiagGaussian2:
    """Object position density with independent components, expressed in the evaluation frame"""

    mean: Vec2
    sigma1: float
    sigma2: float

    def __post_init__(self) -> None:
        for name, sigma in (("sigma1", self.sigma1), ("sigma2", self.sigma2)):
            if not (math.isfinite(sigma) and sigma > 0):
                raise ValueError(f"{name} must be positive and finite, got {sigma}")

    def shifted(self, origin: Vec2) -> "DiagGaussian2":
        """Same density expressed in a frame translated to `origin`"""
        return DiagGaussian2(self.mean - origin, self.sigma1, self.sigma2)

    def swapped(self) -> "DiagGaussian2":
        """Same density in a frame rotated by pi / 2 and mirrored so the axes trade places"""
        return DiagGaussian2(Vec2(self.mean.y, self.mean.x), self.sigma2, self.sigma1)


@dataclass(frozen=True, eq=True)
class QuadratureSpec:
    abs_tol: float = 1e-6
    rel_tol: float = 1e-6
    max_subdivisions: int = 50

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError(f"Tolerances must be positive, got abs={self.abs_tol}, rel={self.rel_tol}")
        if self.max_subdivisions < 1:
            raise ValueError(f"At least one subdivision is required, got {self.max_subdivisions}")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True, eq=True)
class RandomSeed:
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"Seed must be an unsigned 64-bit integer, got {self.seed}")

    def offset(self, step: int) -> "RandomSeed":
        return RandomSeed((self.seed + step) % 2**64)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed))


DEFAULT_SEED = RandomSeed()


def pdf(g: DiagGaussian2, q: Vec2) -> float:
    z1 = (q.x - g.mean.x) / g.sigma1
    z2 = (q.y - g.mean.y) / g.sigma2
    return math.exp(-0.5 * (z1 * z1 + z2 * z2)) / (2.0 * math.pi * g.sigma1 * g.sigma2)


def pdf_many(g: DiagGaussian2, x: FloatArray, y: FloatArray) -> FloatArray:
    z1 = (x - g.mean.x) / g.sigma1
    z2 = (y - g.mean.y) / g.sigma2
    result: FloatArray = np.exp(-0.5 * (z1 * z1 + z2 * z2)) / (2.0 * math.pi * g.sigma1 * g.sigma2)
    return result


def sample_array(g: DiagGaussian2, seed: RandomSeed, n: int) -> FloatArray:
    if n < 1:
        raise ValueError(f"At least one sample is required, got {n}")
    standard = seed.generator().standard_normal((n, 2))
    scale = np.array([g.sigma1, g.sigma2])
    shift = np.array([g.mean.x, g.mean.y])
    result: FloatArray = standard * scale + shift
    return result


def sample(g: DiagGaussian2, seed: RandomSeed, n: int) -> list[Vec2]:
    return [Vec2(x, y) for x, y in sample_array(g, seed, n).tolist()]


def erf(x: float) -> float:
    return float(special.erf(x))


def interval_mass(lower: FloatArray, upper: FloatArray, mean: float, sigma: float) -> FloatArray:
    """Probability that N(mean, sigma^2) falls in [lower, upper], zero where the interval is empty"""
    scale = sigma * math.sqrt(2.0)
    mass = 0.5 * (special.erf((upper - mean) / scale) - special.erf((lower - mean) / scale))
    result: FloatArray = np.where(upper > lower, mass, 0.0)
    return result


def support(lower: float, upper: float, mean: float, sigma: float) -> Bounds:
    """Clip [lower, upper] to where a N(mean, sigma^2) factor is numerically non-zero"""
    return max(lower, mean - SUPPORT_SIGMAS * sigma), min(upper, mean + SUPPORT_SIGMAS * sigma)


class QuadratureResult(NamedTuple):
    value: float
    error_estimate: float


def _kronrod(f: Integrand, lefts: FloatArray, rights: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Kronrod value and error estimate for each interval, all evaluated in one integrand call"""
    centers = 0.5 * (lefts + rights)
    half = 0.5 * (rights - lefts)
    values = f((centers[:, None] + half[:, None] * NODES[None, :]).ravel()).reshape(len(lefts), NODES.size)
    kronrod = values @ KRONROD
    gauss = values @ GAUSS
    spread = np.abs(values - 0.5 * kronrod[:, None]) @ KRONROD
    error = np.abs((kronrod - gauss) * half)
    spread = spread * half
    scaled = np.where(
        (spread > 0) & (error > 0),
        spread * np.minimum(1.0, (200.0 * error / np.where(spread > 0, spread, 1.0)) ** 1.5),
        error,
    )
    return kronrod * half, scaled


def integrate_1d(
    f: Integrand, a: float, b: float, spec: QuadratureSpec = DEFAULT_QUADRATURE, *, points: Sequence[float] = ()
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod quadrature.

    The interval with the largest error estimate is bisected until the summed estimate drops below
    `max(abs_tol, rel_tol * |value|)`. `points` are extra initial breakpoints (kinks, peaks).

    Raises:
        QuadratureError: if `spec.max_subdivisions` bisections do not reach the tolerance.
    """
    if not a <= b:
        raise ValueError(f"Integration bounds must satisfy a <= b, got [{a}, {b}]")
    if a == b:
        return QuadratureResult(0.0, 0.0)
    edges = np.unique(np.array([a, *(p for p in points if a < p < b), b], dtype=np.float64))
    values, errors = _kronrod(f, edges[:-1], edges[1:])
    heap = [
        (-err, left, right, val)
        for left, right, val, err in zip(
            edges[:-1].tolist(), edges[1:].tolist(), values.tolist(), errors.tolist(), strict=True
        )
    ]
    heapq.heapify(heap)
    total = math.fsum(values.tolist())
    total_error = math.fsum(errors.tolist())
    subdivisions = 0
    while total_error > spec.tolerance(total):
        if subdivisions >= spec.max_subdivisions:
            logger.error(
                "Quadrature on [%g, %g] did not converge after %d subdivisions (error %.3g)",
                a,
                b,
                subdivisions,
                total_error,
            )
            raise QuadratureError(
                f"Quadrature did not reach tolerance {spec.tolerance(total):.3g} after {subdivisions} "
                f"subdivisions (error estimate {total_error:.3g})",
                value=total,
                error_estimate=total_error,
            )
        neg_err, left, right, value = heapq.heappop(heap)
        middle = 0.5 * (left + right)
        if not left < middle < right:
            # exhausted at machine precision, keep its contribution with no further refinement
            heapq.heappush(heap, (-0.0, left, right, value))
            total_error = max(total_error + neg_err, 0.0)
            continue
        halves, half_errors = _kronrod(f, np.array([left, middle]), np.array([middle, right]))
        (first, second), (first_error, second_error) = halves.tolist(), half_errors.tolist()
        heapq.heappush(heap, (-first_error, left, middle, first))
        heapq.heappush(heap, (-second_error, middle, right, second))
        subdivisions += 1
        total += first + second - value
        total_error = max(total_error + first_error + second_error + neg_err, 0.0)
    return QuadratureResult(math.fsum(item[3] for item in heap), total_error)


def _integrate_many(
    f: Integrand2D, xs: FloatArray, lowers: FloatArray, uppers: FloatArray, spec: QuadratureSpec
) -> tuple[FloatArray, FloatArray]:
    """One adaptive integral over y per abscissa in `xs`, all refined together.

    Each round bisects the worst panel of every integral that has not reached its tolerance, and
    every round costs a single integrand call.
    """
    values = np.zeros_like(xs)
    errors = np.zeros_like(xs)
    owner = np.flatnonzero(lowers < uppers)
    if owner.size == 0:
        return values, errors

    def panels(owners: NDArray[np.intp], lefts: FloatArray, rights: FloatArray) -> tuple[FloatArray, FloatArray]:
        at = np.repeat(xs[owners], NODES.size)
        return _kronrod(lambda ys: f(at, ys), lefts, rights)

    left, right = lowers[owner], uppers[owner]
    panel_values, panel_errors = panels(owner, left, right)
    for rounds in itertools.count():
        values = np.bincount(owner, weights=panel_values, minlength=xs.size)
        errors = np.bincount(owner, weights=panel_errors, minlength=xs.size)
        pending = errors > np.maximum(spec.abs_tol, spec.rel_tol * np.abs(values))
        if not pending.any():
            break
        if rounds >= spec.max_subdivisions:
            worst = int(np.argmax(np.where(pending, errors, -np.inf)))
            logger.error(
                "Inner quadrature at x = %g did not converge after %d subdivisions (error %.3g)",
                xs[worst],
                rounds,
                errors[worst],
            )
            raise QuadratureError(
                f"Inner quadrature at x = {xs[worst]:g} did not converge after {rounds} subdivisions "
                f"(error estimate {errors[worst]:.3g})",
                value=float(values[worst]),
                error_estimate=float(errors[worst]),
            )
        # panels sorted by owner, largest error first within each owner
        order = np.lexsort((-panel_errors, owner))
        leading = np.ones(order.size, dtype=bool)
        leading[1:] = owner[order][1:] != owner[order][:-1]
        split = order[leading]
        split = split[pending[owner[split]]]
        middle = 0.5 * (left[split] + right[split])
        usable = (left[split] < middle) & (middle < right[split])
        panel_errors[split[~usable]] = 0.0
        split, middle = split[usable], middle[usable]
        if split.size == 0:
            continue
        old_right = right[split]
        new_owner = owner[split]
        halves, half_errors = panels(
            np.concatenate((new_owner, new_owner)),
            np.concatenate((left[split], middle)),
            np.concatenate((middle, old_right)),
        )
        count = split.size
        right[split] = middle
        panel_values[split] = halves[:count]
        panel_errors[split] = half_errors[:count]
        owner = np.concatenate((owner, new_owner))
        left = np.concatenate((left, middle))
        right = np.concatenate((right, old_right))
        panel_values = np.concatenate((panel_values, halves[count:]))
        panel_errors = np.concatenate((panel_errors, half_errors[count:]))
    return values, errors


def integrate_2d(
    f: Integrand2D,
    x_range: Bounds,
    y_bounds: Bounds | BoundsFunction,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    points: Sequence[float] = (),
) -> QuadratureResult:
    """Nested adaptive quadrature of f(x, y) over x in `x_range`, y within `y_bounds(x)`.

    `f` takes arrays of x and y of equal shape; a callable `y_bounds` maps an array of x to arrays of
    lower and upper bounds. The inner integrals for all outer nodes of a refinement step are evaluated
    together. Inner ranges with `lower >= upper` contribute zero.
    """
    inner_errors: list[float] = []

    def outer(xs: FloatArray) -> FloatArray:
        if callable(y_bounds):
            lowers, uppers = y_bounds(xs)
        else:
            lowers, uppers = np.full_like(xs, y_bounds[0]), np.full_like(xs, y_bounds[1])
        values, errors = _integrate_many(f, xs, lowers, uppers, spec)
        inner_errors.append(float(errors.max(initial=0.0)))
        return values

    value, error = integrate_1d(outer, x_range[0], x_range[1], spec, points=points)
    width = x_range[1] - x_range[0]
    return QuadratureResult(value, error + width * max(inner_errors, default=0.0))
