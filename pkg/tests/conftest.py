import math
import os
import sys

import numpy as np
import pytest

# Ensure the package is in path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from spindlekit.geometry import PointSet  # noqa: E402


SQRT2 = math.sqrt(2.0)
SAMPLES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'samples')


def circle_points(k, rho=1.0, phase=0.0, center=(0.0, 0.0)):
    t = phase + 2.0 * np.pi * np.arange(k) / k
    return np.column_stack([center[0] + rho * np.cos(t), center[1] + rho * np.sin(t)])


def random_planar_sets(seed, trials, n_min=5, n_max=15):
    """Seeded random point sets in [-1, 1]^2."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        n = int(rng.integers(n_min, n_max + 1))
        yield PointSet.from_points(rng.uniform(-1.0, 1.0, size=(n, 2)))


@pytest.fixture
def circle12():
    return PointSet.from_points(circle_points(12))


@pytest.fixture
def square():
    return PointSet.from_points([(1, 1), (-1, 1), (-1, -1), (1, -1)])


@pytest.fixture
def square_with_center():
    return PointSet.from_points([(1, 1), (-1, 1), (-1, -1), (1, -1), (0, 0)])


@pytest.fixture
def two_points():
    return PointSet.from_points([(0, 0), (2, 0)])


@pytest.fixture
def collinear():
    return PointSet.from_points([(-1, 0), (0, 0), (1, 0)])


@pytest.fixture
def singleton():
    return PointSet.from_points([(0.25, -0.5)])


@pytest.fixture
def samples_dir():
    return SAMPLES_DIR
