import math

import numpy as np
import pytest

from circlepoc.geometry import (
    AXIS_X,
    AXIS_Y,
    ORIGIN,
    Circle,
    CoverArrangement,
    CoverMode,
    GeometryError,
    Pose,
    RectangleFootprint,
    Vec2,
    arrangement_lenses,
    collision_indicator,
    cover_arrangement,
    inscribed_two_circles,
    lens_geometry,
    lens_half_width,
    lens_half_widths,
    overlap_regions,
    rectangle_circle_indicator,
    rectangle_circle_indicator_many,
)


def test_vector_arithmetic() -> None:
    a, b = Vec2(1.0, 2.0), Vec2(-3.0, 0.5)
    assert a + b == Vec2(-2.0, 2.5)
    assert a - b == Vec2(4.0, 1.5)
    assert a * 2.0 == Vec2(2.0, 4.0)
    assert -a == Vec2(-1.0, -2.0)
    assert Vec2(3.0, 4.0).norm() == 5.0


def test_vector_rejects_non_finite() -> None:
    with pytest.raises(GeometryError, match="finite"):
        Vec2(math.nan, 0.0)
    with pytest.raises(GeometryError, match="finite"):
        Vec2(0.0, math.inf)


def test_pose_heading_is_normalized() -> None:
    assert Pose(ORIGIN, -math.pi / 2).heading == pytest.approx(3 * math.pi / 2)
    assert Pose(ORIGIN, 5 * math.pi).heading == pytest.approx(math.pi)


@pytest.mark.parametrize(
    ("pose", "point", "expected"),
    [
        (Pose(Vec2(0.0, 4.0), 0.0), Vec2(4.0, 0.0), Vec2(4.0, -4.0)),
        (Pose(Vec2(1.0, 1.0), 0.0), Vec2(1.0, 1.0), Vec2(0.0, 0.0)),
        (Pose(ORIGIN, math.pi / 2), Vec2(1.0, 0.0), Vec2(0.0, -1.0)),
        (Pose(ORIGIN, math.pi / 2), Vec2(0.0, 2.0), Vec2(2.0, 0.0)),
    ],
)
def test_to_body(pose: Pose, point: Vec2, expected: Vec2) -> None:
    local = pose.to_body(point)
    assert local.x == pytest.approx(expected.x, abs=1e-12)
    assert local.y == pytest.approx(expected.y, abs=1e-12)


@pytest.mark.parametrize(("length", "width"), [(2.0, 4.5), (2.0, 2.0), (4.5, 0.0), (4.5, -1.0), (math.inf, 2.0)])
def test_invalid_rectangle(length: float, width: float) -> None:
    with pytest.raises(GeometryError):
        RectangleFootprint(length, width)


def test_two_circle_cover(car: RectangleFootprint) -> None:
    arr = cover_arrangement(car, 2)
    assert arr.radius == pytest.approx(math.hypot(1.125, 1.0))
    assert arr.axial_spacing == pytest.approx(2.25)
    assert arr.centers == (Vec2(1.125, 0.0), Vec2(-1.125, 0.0))
    assert arr.mode is CoverMode.COVER


def test_grid_cover_layout(car: RectangleFootprint) -> None:
    arr = cover_arrangement(car, 6, 2)
    assert arr.per_axis == 3
    assert arr.radius == pytest.approx(math.hypot(0.75, 0.5))
    assert arr.axis_spacing == pytest.approx(1.0)
    assert arr.center(0, 0) == Vec2(1.5, 0.5)
    assert arr.center(1, 2) == Vec2(-1.5, -0.5)
    assert arr.as_array().shape == (6, 2)


def test_cover_rejects_uneven_split(car: RectangleFootprint) -> None:
    with pytest.raises(GeometryError, match="evenly"):
        cover_arrangement(car, 5, 2)


def test_cover_spacing_check() -> None:
    arr = CoverArrangement(
        n_circles=2,
        n_axes=1,
        radius=1.0,
        axial_spacing=5.0,
        axis_spacing=2.0,
        centers=(Vec2(2.5, 0.0), Vec2(-2.5, 0.0)),
    )
    arr.check_spacing(1.5)
    with pytest.raises(GeometryError, match="exceeds"):
        arr.check_spacing(1.0)


@pytest.mark.parametrize(("n_circles", "n_axes"), [(1, 1), (2, 1), (4, 1), (6, 2), (4, 4)])
def test_cover_contains_rectangle(car: RectangleFootprint, n_circles: int, n_axes: int) -> None:
    arr = cover_arrangement(car, n_circles, n_axes)
    rng = np.random.default_rng(5)
    points = np.column_stack(
        (rng.uniform(-car.length / 2, car.length / 2, 100_000), rng.uniform(-car.width / 2, car.width / 2, 100_000))
    )
    centers = arr.as_array()
    distances = np.hypot(points[:, None, 0] - centers[None, :, 0], points[:, None, 1] - centers[None, :, 1])
    assert (distances.min(axis=1) <= arr.radius * (1 + 1e-12)).all()


def test_inscribed_pair_stays_inside(car: RectangleFootprint) -> None:
    arr = inscribed_two_circles(car)
    assert arr.radius == 1.0
    assert arr.centers == (Vec2(1.25, 0.0), Vec2(-1.25, 0.0))
    assert arr.mode is CoverMode.INSCRIBED
    rng = np.random.default_rng(6)
    angle = rng.uniform(0.0, 2 * math.pi, 100_000)
    radius = arr.radius * np.sqrt(rng.uniform(0.0, 1.0, 100_000))
    for center in arr.centers:
        x = center.x + radius * np.cos(angle)
        y = center.y + radius * np.sin(angle)
        assert (np.abs(x) <= car.length / 2 + 1e-12).all()
        assert (np.abs(y) <= car.width / 2 + 1e-12).all()


def test_collision_indicator_tangency() -> None:
    assert collision_indicator(ORIGIN, Vec2(3.0, 0.0), 1.0, 2.0)
    assert not collision_indicator(ORIGIN, Vec2(3.0, 1e-6), 1.0, 2.0)
    assert collision_indicator(ORIGIN, Vec2(0.5, 0.5), 1.0, 0.0)


@pytest.mark.parametrize(
    ("ego", "obj", "expected"),
    [
        (Pose(ORIGIN), Circle(Vec2(3.0, 0.0), 0.75), True),
        (Pose(ORIGIN), Circle(Vec2(3.3, 0.0), 0.75), False),
        (Pose(ORIGIN), Circle(Vec2(0.0, 0.0), 0.1), True),
        (Pose(ORIGIN), Circle(Vec2(2.25 + 0.3, 1.0 + 0.4), 0.5000001), True),
        (Pose(ORIGIN), Circle(Vec2(2.25 + 0.3, 1.0 + 0.4), 0.49), False),
        (Pose(ORIGIN, math.pi / 2), Circle(Vec2(0.0, 3.0), 0.8), True),
        (Pose(ORIGIN, math.pi / 2), Circle(Vec2(3.0, 0.0), 0.8), False),
    ],
)
def test_rectangle_circle_indicator(car: RectangleFootprint, ego: Pose, obj: Circle, expected: bool) -> None:
    assert rectangle_circle_indicator(ego, car, obj) is expected


def test_rectangle_indicator_vectorised_matches_scalar(car: RectangleFootprint) -> None:
    ego = Pose(Vec2(1.0, -2.0), 0.7)
    points = np.random.default_rng(8).uniform(-6.0, 6.0, size=(500, 2))
    many = rectangle_circle_indicator_many(ego, car, points, 1.5)
    single = [rectangle_circle_indicator(ego, car, Circle(Vec2(x, y), 1.5)) for x, y in points.tolist()]
    assert many.tolist() == single


def test_lens_geometry() -> None:
    lens = lens_geometry(1.5, 2.0, 2.25, ORIGIN, AXIS_X)
    assert lens.collision_radius == 3.5
    assert lens.half_height == pytest.approx(math.sqrt(3.5**2 - 1.125**2))
    assert not lens.lateral
    assert lens_half_width(lens, 0.0) == pytest.approx(3.5 - 1.125)
    assert lens_half_width(lens, lens.half_height) == pytest.approx(0.0, abs=1e-7)
    with pytest.raises(GeometryError, match="outside the lens"):
        lens_half_width(lens, lens.half_height * 1.01)
    widths = lens_half_widths(lens, np.array([0.0, lens.half_height * 2]))
    assert widths.tolist() == pytest.approx([3.5 - 1.125, 0.0])


@pytest.mark.parametrize("spacing", [0.0, 7.0, 8.0])
def test_lens_requires_overlapping_discs(spacing: float) -> None:
    with pytest.raises(GeometryError):
        lens_geometry(1.5, 2.0, spacing, ORIGIN, AXIS_X)


def test_lens_axis_must_be_aligned() -> None:
    with pytest.raises(GeometryError, match="axis"):
        lens_geometry(1.5, 2.0, 1.0, ORIGIN, Vec2(math.sqrt(0.5), math.sqrt(0.5)))


def test_grid_lenses_and_overlaps(car: RectangleFootprint) -> None:
    arr = cover_arrangement(car, 6, 2)
    lenses = arrangement_lenses(arr, 2.0)
    assert [lens.axis_unit for lens in lenses] == [AXIS_X] * 4 + [AXIS_Y] * 3
    assert lenses[0].midpoint == Vec2(0.75, 0.5)
    assert lenses[4].midpoint == Vec2(1.5, 0.0)
    overlaps = overlap_regions(arr, 2.0)
    assert len(overlaps) == 2
    assert overlaps[0].midpoint == Vec2(0.75, 0.0)
    assert overlaps[0].spans == pytest.approx((1.5, 1.0))
    assert overlaps[0].half_height == pytest.approx(math.sqrt((arr.radius + 2.0) ** 2 - 0.75**2) - 0.5)


def test_overlaps_need_a_cover(car: RectangleFootprint) -> None:
    with pytest.raises(GeometryError, match="covering"):
        overlap_regions(inscribed_two_circles(car), 2.0)
