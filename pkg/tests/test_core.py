import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spindlekit.errors import DimensionMismatchError, InputError
from spindlekit.geometry.core import (
    Ball,
    PointSet,
    Tolerance,
    diameter,
    distance_to_set,
    farthest_distance,
    farthest_normals,
    farthest_points,
    projections,
    proximal_normals,
)
from spindlekit.geometry.regions import ball_intersection_2d

from conftest import SQRT2, random_planar_sets


def test_duplicates_merged_keep_lowest_index():
    S = PointSet.from_points([(0, 0), (0, 0), (2, 0), (0, 1e-14)])
    assert len(S) == 2
    assert S.indices == (0, 2)
    assert S.duplicates_merged == 2


def test_duplicate_merge_is_logged_once_as_warning(caplog):
    with caplog.at_level(logging.DEBUG):
        PointSet.from_points([(0, 0), (0, 0), (1, 0)])
    warnings = [r for r in caplog.records if r.levelno == logging.WARNING]
    assert [r.getMessage() for r in warnings] == ["merged 1 duplicate point(s)"]

    caplog.clear()
    with caplog.at_level(logging.DEBUG):
        ball_intersection_2d([(0, 0), (0, 0), (1, 0)], 1.0)
    assert not [r for r in caplog.records if r.levelno >= logging.WARNING]


def test_dimension_mismatch_reports_point_path():
    with pytest.raises(InputError) as err:
        PointSet.from_points([(0, 0), (1, 2, 3)])
    assert err.value.path == ".points[1]"


@pytest.mark.parametrize('bad', [[(0, float('nan'))], [(float('inf'), 0)], []])
def test_rejects_non_finite_and_empty(bad):
    with pytest.raises(InputError):
        PointSet.from_points(bad)


def test_coordinates_are_read_only(two_points):
    with pytest.raises(ValueError):
        two_points.coords[0, 0] = 5.0


def test_labels_follow_kept_points():
    S = PointSet.from_points([(0, 0), (0, 0), (1, 0)], labels=['a', 'b', 'c'])
    assert S.labels == ('a', 'c')
    assert S.label(1) == 'c'


@pytest.mark.parametrize('x, expected', [((0, 0), 0.0), ((1, 0), 1.0), ((0.9, 0), 0.9)])
def test_distance_to_set(two_points, x, expected):
    assert distance_to_set(x, two_points) == pytest.approx(expected)


def test_farthest_distance(square, two_points):
    assert farthest_distance((0, 0), square) == pytest.approx(SQRT2)
    assert farthest_distance((3, 0), two_points) == pytest.approx(3.0)
    assert farthest_distance((0, 0), PointSet.from_points([(0, 0)])) == 0.0


def test_projection_ties_are_reported_in_index_order(two_points):
    assert_allclose(projections((0.9, 0), two_points), [[0, 0]])
    assert_allclose(projections((1, 0), two_points), [[0, 0], [2, 0]])


def test_farthest_points(square, two_points):
    assert len(farthest_points((0, 0), square)) == 4
    assert_allclose(farthest_points((3, 0), two_points), [[0, 0]])
    assert_allclose(farthest_points((1, 0), two_points), [[0, 0], [2, 0]])


def test_normals_from_projection_and_farthest_point(two_points):
    (pos, v), = proximal_normals((3, 0), two_points)
    assert pos == 1
    assert_allclose(v, [1, 0])
    (pos, w), = farthest_normals((-1, 0), two_points)
    assert pos == 1
    assert_allclose(w, [3, 0])


def test_query_dimension_is_checked(two_points):
    with pytest.raises(DimensionMismatchError):
        distance_to_set((0, 0, 0), two_points)


def test_diameter_fixed_cases(square, two_points):
    assert diameter(PointSet.from_points([(0, 0)])) == 0.0
    assert diameter(two_points) == pytest.approx(2.0)
    assert diameter(square) == pytest.approx(2.0 * SQRT2)


@pytest.mark.parametrize('dim', [2, 3, 4])
def test_diameter_matches_all_pairs(dim):
    rng = np.random.default_rng(7 + dim)
    P = rng.normal(size=(300, dim))
    brute = np.max(np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1))
    assert diameter(PointSet.from_points(P)) == pytest.approx(brute, rel=1e-12)


def test_diameter_of_flat_set_falls_back_when_hull_fails():
    P = np.column_stack([np.linspace(0, 5, 100), np.zeros(100)])
    assert diameter(PointSet.from_points(P)) == pytest.approx(5.0)


def test_tolerance_scales_with_diameter(square):
    tol = Tolerance.for_set(square)
    assert tol.rel_scale == pytest.approx(2.0 * SQRT2)
    assert tol.band == pytest.approx(1e-9 * 2.0 * SQRT2)
    assert Tolerance.for_set(PointSet.from_points([(0, 0), (0.1, 0)])).rel_scale == 1.0


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(abs_eps=0.0)
    with pytest.raises(ValueError):
        Tolerance(rel_scale=0.5)


def test_position_of(square):
    assert square.position_of((-1, -1)) == 2
    assert square.position_of((-1, -1 + 1e-15)) == 2
    assert square.position_of((0, 0)) is None


def test_ball_membership():
    ball = Ball(np.array([0.0, 0.0]), 1.0)
    assert ball.contains((1, 0))
    assert not ball.contains((1.1, 0))
    assert not Ball(np.array([0.0, 0.0]), 1.0, closed=False).contains((1, 0))
    with pytest.raises(ValueError):
        Ball(np.array([0.0, 0.0]), 0.0)
    assert math.isclose(ball.radius, 1.0)


def _queries(seed, count=10):
    return np.random.default_rng(seed).uniform(-3.0, 3.0, size=(count, 2))


def test_proximal_and_farthest_inequalities():
    for trial, S in enumerate(random_planar_sets(seed=5, trials=30)):
        band = Tolerance.for_set(S).band
        for x in _queries(trial):
            for s in projections(x, S):
                lhs = (S.coords - s) @ (x - s)
                rhs = 0.5 * np.einsum('ij,ij->i', S.coords - s, S.coords - s)
                assert np.all(lhs <= rhs + band)
            for s in farthest_points(x, S):
                lhs = (S.coords - s) @ (s - x)
                rhs = -0.5 * np.einsum('ij,ij->i', S.coords - s, S.coords - s)
                assert np.all(lhs <= rhs + band)


def test_projection_constant_along_the_segment():
    for trial, S in enumerate(random_planar_sets(seed=6, trials=30)):
        for x in _queries(100 + trial):
            nearest = projections(x, S)
            if len(nearest) != 1:
                continue
            s = nearest[0]
            for t in (0.0, 0.25, 0.5, 0.75, 0.99):
                moved = projections(s + t * (x - s), S)
                assert len(moved) == 1
                assert_allclose(moved[0], s)


def test_farthest_point_fixed_along_the_ray():
    for trial, S in enumerate(random_planar_sets(seed=7, trials=30)):
        for x in _queries(200 + trial):
            far = farthest_points(x, S)
            if len(far) != 1:
                continue
            s = far[0]
            for t in (0.1, 1.0, 10.0):
                moved = farthest_points(x + t * (x - s), S)
                assert len(moved) == 1
                assert_allclose(moved[0], s)


def test_distance_below_farthest_distance():
    for trial, S in enumerate(random_planar_sets(seed=8, trials=30)):
        for x in _queries(300 + trial):
            assert distance_to_set(x, S) < farthest_distance(x, S)
    single = PointSet.from_points([(0.3, -0.2)])
    for x in _queries(400):
        assert distance_to_set(x, single) == farthest_distance(x, single)
