"""Planar shapes, circle arrangements covering the ego rectangle, and collision-region geometry.

All arrangement coordinates live in the ego body frame: origin at the rectangle center, x along the
length (positive towards the front), y along the width (positive to the left).
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "AXIS_X",
    "AXIS_Y",
    "ORIGIN",
    "Circle",
    "CoverArrangement",
    "CoverMode",
    "GeometryError",
    "LensGeometry",
    "OverlapRegion",
    "Pose",
    "RectangleFootprint",
    "Vec2",
    "arrangement_lenses",
    "collision_indicator",
    "cover_arrangement",
    "inscribed_two_circles",
    "lens_geometry",
    "lens_half_width",
    "lens_half_widths",
    "overlap_regions",
    "rectangle_circle_indicator",
    "rectangle_circle_indicator_many",
]

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError): ...


@dataclass(frozen=True, eq=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"Vector components must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, factor: float) -> "Vec2":
        return Vec2(self.x * factor, self.y * factor)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def rotated(self, angle: float) -> "Vec2":
        """Rotate counter-clockwise about the origin"""
        cos, sin = math.cos(angle), math.sin(angle)
        return Vec2(cos * self.x - sin * self.y, sin * self.x + cos * self.y)


ORIGIN = Vec2(0.0, 0.0)
AXIS_X = Vec2(1.0, 0.0)
AXIS_Y = Vec2(0.0, 1.0)


@dataclass(frozen=True, eq=True)
class Pose:
    position: Vec2
    heading: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.heading):
            raise GeometryError(f"Heading must be finite, got {self.heading}")
        object.__setattr__(self, "heading", self.heading % TWO_PI)

    def to_body(self, point: Vec2) -> Vec2:
        """Express a global point in this pose's body frame"""
        return (point - self.position).rotated(-self.heading)


@dataclass(frozen=True, eq=True)
class Circle:
    center: Vec2
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise GeometryError(f"Circle radius must be positive, got {self.radius}")


@dataclass(frozen=True, eq=True)
class RectangleFootprint:
    length: float
    width: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.length) and math.isfinite(self.width)):
            raise GeometryError("Rectangle dimensions must be finite")
        if not self.width > 0:
            raise GeometryError(f"Rectangle width must be positive, got {self.width}")
        if not self.length > self.width:
            raise GeometryError(f"Rectangle length must exceed its width, got {self.length} <= {self.width}")


class CoverMode(str, Enum):
    COVER = "cover"
    INSCRIBED = "inscribed"


@dataclass(frozen=True, eq=True)
class CoverArrangement:
    """Equal circles on a grid of `n_axes` axes parallel to the length, `n_circles / n_axes` per axis.

    Centers are ordered axis by axis (from +y to -y) and front to back (from +x to -x) within an axis.
    """

    n_circles: int
    n_axes: int
    radius: float
    axial_spacing: float
    axis_spacing: float
    centers: tuple[Vec2, ...]
    mode: CoverMode = CoverMode.COVER

    def __post_init__(self) -> None:
        if self.n_circles < 1 or self.n_axes < 1:
            raise GeometryError("Arrangement needs at least one circle and one axis")
        if self.n_circles % self.n_axes:
            raise GeometryError(f"{self.n_circles} circles cannot be split evenly over {self.n_axes} axes")
        if len(self.centers) != self.n_circles:
            raise GeometryError(f"Expected {self.n_circles} centers, got {len(self.centers)}")
        if not self.radius > 0:
            raise GeometryError(f"Circle radius must be positive, got {self.radius}")

    @property
    def per_axis(self) -> int:
        return self.n_circles // self.n_axes

    def center(self, axis: int, index: int) -> Vec2:
        return self.centers[axis * self.per_axis + index]

    def check_spacing(self, object_radius: float) -> None:
        """Consecutive collision discs must touch, or the union leaves holes along the axis"""
        if self.per_axis > 1 and self.axial_spacing > 2.0 * (self.radius + object_radius):
            raise GeometryError(
                f"Axial spacing {self.axial_spacing} exceeds the collision diameter "
                f"{2.0 * (self.radius + object_radius)}"
            )

    def as_array(self) -> NDArray[np.float64]:
        return np.array([(center.x, center.y) for center in self.centers], dtype=np.float64)


def cover_arrangement(
    rect: RectangleFootprint, n_circles: int, n_axes: int = 1, *, object_radius: float | None = None
) -> CoverArrangement:
    """Smallest equal circles covering the rectangle, applied per sub-rectangle of width w / n_axes.

    With N circles on an axis covering a length l and width w', the radius is
    sqrt((l / 2N)^2 + w'^2 / 4) and consecutive centers sit l / N apart.
    """
    if n_circles < 1 or n_axes < 1:
        raise GeometryError("Arrangement needs at least one circle and one axis")
    if n_circles % n_axes:
        raise GeometryError(f"{n_circles} circles cannot be split evenly over {n_axes} axes")
    per_axis = n_circles // n_axes
    sub_width = rect.width / n_axes
    radius = math.hypot(rect.length / (2 * per_axis), sub_width / 2)
    # 2 * sqrt(radius^2 - sub_width^2 / 4) reduces to l / N exactly
    axial_spacing = rect.length / per_axis
    centers = tuple(
        Vec2((per_axis - 1) / 2 * axial_spacing - i * axial_spacing, rect.width / 2 - (j + 0.5) * sub_width)
        for j in range(n_axes)
        for i in range(per_axis)
    )
    arrangement = CoverArrangement(
        n_circles=n_circles,
        n_axes=n_axes,
        radius=radius,
        axial_spacing=axial_spacing,
        axis_spacing=sub_width,
        centers=centers,
        mode=CoverMode.COVER,
    )
    if object_radius is not None:
        arrangement.check_spacing(object_radius)
    return arrangement


def inscribed_two_circles(rect: RectangleFootprint) -> CoverArrangement:
    """Two circles of radius w / 2 touching the rectangle's sides, centers l - w apart"""
    spacing = rect.length - rect.width
    if not spacing > 0:
        raise GeometryError(f"Inscribed circles need length > width, got {rect.length} <= {rect.width}")
    return CoverArrangement(
        n_circles=2,
        n_axes=1,
        radius=rect.width / 2,
        axial_spacing=spacing,
        axis_spacing=rect.width,
        centers=(Vec2(spacing / 2, 0.0), Vec2(-spacing / 2, 0.0)),
        mode=CoverMode.INSCRIBED,
    )


def collision_indicator(q_e: Vec2, q_o: Vec2, r_e: float, r_o: float) -> bool:
    """Tangency counts as a collision"""
    return math.hypot(q_e.x - q_o.x, q_e.y - q_o.y) <= r_e + r_o


def rectangle_circle_indicator(ego: Pose, rect: RectangleFootprint, obj: Circle) -> bool:
    local = ego.to_body(obj.center)
    half_l, half_w = rect.length / 2, rect.width / 2
    nearest = Vec2(min(max(local.x, -half_l), half_l), min(max(local.y, -half_w), half_w))
    return (local - nearest).norm() <= obj.radius


def rectangle_circle_indicator_many(
    ego: Pose, rect: RectangleFootprint, positions: NDArray[np.float64], object_radius: float
) -> NDArray[np.bool_]:
    """Vectorised `rectangle_circle_indicator` over an (n, 2) array of global object centers"""
    cos, sin = math.cos(ego.heading), math.sin(ego.heading)
    dx = positions[:, 0] - ego.position.x
    dy = positions[:, 1] - ego.position.y
    local_x = cos * dx + sin * dy
    local_y = -sin * dx + cos * dy
    half_l, half_w = rect.length / 2, rect.width / 2
    gap_x = local_x - np.clip(local_x, -half_l, half_l)
    gap_y = local_y - np.clip(local_y, -half_w, half_w)
    result: NDArray[np.bool_] = np.hypot(gap_x, gap_y) <= object_radius
    return result


@dataclass(frozen=True, eq=True)
class LensGeometry:
    """Positions colliding with two ego circles at once, seen from the midpoint between their centers.

    `half_height` is the reach of the lens perpendicular to `axis_unit`; along the axis the lens
    spans `lens_half_width` on either side of the midpoint.
    """

    midpoint: Vec2
    axis_unit: Vec2
    collision_radius: float
    center_spacing: float
    half_height: float

    def __post_init__(self) -> None:
        if self.axis_unit not in (AXIS_X, AXIS_Y):
            raise GeometryError(f"Lens axis must be (1, 0) or (0, 1), got {self.axis_unit}")
        if not 0 < self.center_spacing < 2 * self.collision_radius:
            raise GeometryError(
                f"Center spacing {self.center_spacing} leaves no lens for collision radius {self.collision_radius}"
            )
        expected = math.sqrt(self.collision_radius**2 - self.center_spacing**2 / 4)
        if not math.isclose(self.half_height, expected, rel_tol=1e-12, abs_tol=1e-15):
            raise GeometryError(f"Lens half height {self.half_height} does not match {expected}")

    @property
    def lateral(self) -> bool:
        """True when the circles sit on adjacent axes rather than along the same axis"""
        return self.axis_unit == AXIS_Y


def lens_geometry(r_e: float, r_o: float, d_c: float, midpoint: Vec2, axis_unit: Vec2) -> LensGeometry:
    collision_radius = r_e + r_o
    if not 0 < d_c < 2 * collision_radius:
        raise GeometryError(f"Center spacing {d_c} must lie in (0, {2 * collision_radius}) to form a lens")
    return LensGeometry(
        midpoint=midpoint,
        axis_unit=axis_unit,
        collision_radius=collision_radius,
        center_spacing=d_c,
        half_height=math.sqrt(collision_radius**2 - d_c**2 / 4),
    )


def lens_half_width(lens: LensGeometry, t: float) -> float:
    """Half extent of the lens along its axis at perpendicular offset `t` from the midpoint"""
    if abs(t) > lens.half_height * (1 + 1e-12):
        raise GeometryError(f"Offset {t} lies outside the lens (half height {lens.half_height})")
    return max(0.0, math.sqrt(max(lens.collision_radius**2 - t**2, 0.0)) - lens.center_spacing / 2)


def lens_half_widths(lens: LensGeometry, t: NDArray[np.float64]) -> NDArray[np.float64]:
    """Vectorised `lens_half_width`, zero outside the lens"""
    reach = np.sqrt(np.clip(lens.collision_radius**2 - t**2, 0.0, None))
    result: NDArray[np.float64] = np.clip(reach - lens.center_spacing / 2, 0.0, None)
    return result


@dataclass(frozen=True, eq=True)
class OverlapRegion:
    """Intersection of the collision discs around four grid-adjacent ego circles"""

    centers: tuple[Vec2, Vec2, Vec2, Vec2]
    collision_radius: float

    def __post_init__(self) -> None:
        if len(self.centers) != 4:
            raise GeometryError(f"Overlap region needs exactly 4 centers, got {len(self.centers)}")
        if not self.collision_radius > 0:
            raise GeometryError(f"Collision radius must be positive, got {self.collision_radius}")
        span_x, span_y = self.spans
        if math.hypot(span_x, span_y) / 2 > self.collision_radius:
            raise GeometryError("The four collision discs do not share a common point")

    @property
    def spans(self) -> tuple[float, float]:
        xs = [center.x for center in self.centers]
        ys = [center.y for center in self.centers]
        return max(xs) - min(xs), max(ys) - min(ys)

    @property
    def midpoint(self) -> Vec2:
        return Vec2(
            sum(center.x for center in self.centers) / 4,
            sum(center.y for center in self.centers) / 4,
        )

    @property
    def half_height(self) -> float:
        """Reach of the region along y from its midpoint"""
        span_x, span_y = self.spans
        return max(0.0, math.sqrt(self.collision_radius**2 - span_x**2 / 4) - span_y / 2)


def arrangement_lenses(arr: CoverArrangement, r_o: float) -> list[LensGeometry]:
    """Axial lenses between consecutive circles of each axis, then lateral lenses between adjacent axes"""
    lenses = [
        lens_geometry(
            arr.radius,
            r_o,
            arr.axial_spacing,
            (arr.center(axis, i) + arr.center(axis, i + 1)) * 0.5,
            AXIS_X,
        )
        for axis in range(arr.n_axes)
        for i in range(arr.per_axis - 1)
    ]
    lenses.extend(
        lens_geometry(
            arr.radius,
            r_o,
            arr.axis_spacing,
            (arr.center(axis, i) + arr.center(axis + 1, i)) * 0.5,
            AXIS_Y,
        )
        for axis in range(arr.n_axes - 1)
        for i in range(arr.per_axis)
    )
    return lenses


def overlap_regions(arr: CoverArrangement, r_o: float) -> list[OverlapRegion]:
    if arr.mode is not CoverMode.COVER:
        raise GeometryError("Overlap regions are defined for covering arrangements only")
    collision_radius = arr.radius + r_o
    return [
        OverlapRegion(
            centers=(
                arr.center(axis, i),
                arr.center(axis, i + 1),
                arr.center(axis + 1, i),
                arr.center(axis + 1, i + 1),
            ),
            collision_radius=collision_radius,
        )
        for axis in range(arr.n_axes - 1)
        for i in range(arr.per_axis - 1)
    ]
