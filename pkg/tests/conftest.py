import math

import numpy as np
import pytest
from numpy.typing import NDArray

from circlepoc import DiagGaussian2, QuadratureSpec, RectangleFootprint, TimeSeriesRow
from circlepoc.gaussian import RandomSeed, sample_array
from circlepoc.geometry import Pose, Vec2


def rayleigh(radius: float, sigma: float) -> float:
    """Mass of an isotropic Gaussian centered on a disc of the given radius"""
    return 1.0 - math.exp(-(radius**2) / (2.0 * sigma**2))


def _distances(centers: NDArray[np.float64], g: DiagGaussian2, n: int, seed: int) -> NDArray[np.float64]:
    points = sample_array(g, RandomSeed(seed), n)
    result: NDArray[np.float64] = np.hypot(
        points[:, None, 0] - centers[None, :, 0], points[:, None, 1] - centers[None, :, 1]
    )
    return result


def mc_union(
    centers: NDArray[np.float64], radius: float, g: DiagGaussian2, n: int = 200_000, seed: int = 1
) -> tuple[float, float]:
    """Monte Carlo probability of falling into at least one disc, with its standard error"""
    hits = (_distances(centers, g, n, seed) <= radius).any(axis=1)
    p = float(hits.mean())
    return p, math.sqrt(p * (1.0 - p) / n)


def mc_intersection(
    centers: NDArray[np.float64], radius: float, g: DiagGaussian2, n: int = 200_000, seed: int = 1
) -> tuple[float, float]:
    """Monte Carlo probability of falling into every disc at once, with its standard error"""
    hits = (_distances(centers, g, n, seed) <= radius).all(axis=1)
    p = float(hits.mean())
    return p, math.sqrt(p * (1.0 - p) / n)


def random_gaussian(
    rng: np.random.Generator, spread: float = 4.0, sigmas: tuple[float, float] = (0.3, 2.5)
) -> DiagGaussian2:
    return DiagGaussian2(
        Vec2(*rng.uniform(-spread, spread, size=2)),
        float(rng.uniform(*sigmas)),
        float(rng.uniform(*sigmas)),
    )


@pytest.fixture()
def car() -> RectangleFootprint:
    return RectangleFootprint(length=4.5, width=2.0)


@pytest.fixture()
def spec() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240417)


@pytest.fixture()
def scenario_rows() -> list[TimeSeriesRow]:
    return [
        TimeSeriesRow(
            t=step * 0.1,
            ego_pose=Pose(Vec2(step * 0.1, 4.0), 0.0),
            object_position=Vec2(4.0, step * 0.1),
            distance=math.hypot(4.0 - step * 0.1, 4.0 - step * 0.1),
            sigma1=0.5 + step / 7,
            sigma2=1.25 + step / 3,
            poc_lower=0.01 * step,
            poc_upper=0.01 * step + 1.0 / 3.0 * 0.01,
            delta=1.0 / 3.0 * 0.01,
            poc_mcs_rect=0.01 * step + 0.001,
            mcs_samples=100_000,
        )
        for step in range(5)
    ]
