import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spindlekit.errors import DimensionMismatchError, NotInSetError
from spindlekit.geometry import PointSet, Tolerance
from spindlekit.geometry.normals import (
    CertificateKind,
    Direction,
    exterior_sphere_directions_2d,
    far_certificate_from_point,
    far_supported_directions_2d,
    is_far_realized,
    is_realized,
    is_supporting,
    min_norm_far_certificate,
    supporting_direction_lp,
    supporting_directions_2d,
)

from conftest import SQRT2, circle_points, random_planar_sets


def test_realized_margin_on_segment(collinear):
    cert = is_realized(collinear, (0, 0), (0, 1), 1.0)
    assert cert.accepted
    assert cert.margin == pytest.approx(0.5)
    assert cert.kind is CertificateKind.REALIZED


def test_realized_tangency_and_rejection(two_points):
    tangent = is_realized(two_points, (0, 0), (1, 0), 1.0)
    assert tangent.accepted
    assert tangent.margin == pytest.approx(0.0, abs=1e-12)
    rejected = is_realized(two_points, (0, 0), (1, 0), 2.0)
    assert not rejected.accepted
    assert rejected.margin == pytest.approx(-1.0)
    assert rejected.worst_index == 1


def test_far_realized_outward_normal_on_circle(circle12):
    cert = is_far_realized(circle12, (1, 0), (1, 0), 1.0)
    assert cert.accepted
    assert_allclose(cert.far_center, [0, 0], atol=1e-12)


def test_far_realized_antipodal_equality(two_points):
    cert = is_far_realized(two_points, (0, 0), (-1, 0), 1.0)
    assert cert.accepted
    assert cert.margin == pytest.approx(0.0, abs=1e-12)
    assert_allclose(cert.far_center, [1, 0])


@pytest.mark.parametrize('theta', np.linspace(0, 2 * np.pi, 13)[:-1])
@pytest.mark.parametrize('r', [0.5, 1.0, 5.0])
def test_far_realized_rejected_at_segment_middle(collinear, theta, r):
    assert not is_far_realized(collinear, (0, 0), Direction.from_angle(theta), r).accepted


def test_supporting_predicate(collinear):
    assert is_supporting(collinear, (0, 0), (0, 1)).accepted
    assert not is_supporting(collinear, (0, 0), (1, 0)).accepted
    assert is_supporting(collinear, (1, 0), (1, 0)).margin == pytest.approx(1.0)


def test_singleton_is_vacuously_accepted(singleton):
    cert = is_far_realized(singleton, (0.25, -0.5), (0, 1), 1.0)
    assert cert.accepted
    assert cert.degenerate_singleton
    assert math.isinf(cert.margin)


def test_errors(two_points):
    with pytest.raises(NotInSetError):
        is_realized(two_points, (1, 1), (1, 0), 1.0)
    with pytest.raises(DimensionMismatchError):
        is_realized(two_points, (0, 0), (1, 0, 0), 1.0)
    with pytest.raises(ValueError):
        is_realized(two_points, (0, 0), (1, 1), 1.0)
    with pytest.raises(ValueError):
        is_realized(two_points, (0, 0), (1, 0), 0.0)


def test_direction_helpers():
    d = Direction.normalized([3, 4])
    assert_allclose(d.coords, [0.6, 0.8])
    assert Direction.from_angle(math.pi / 2).angle == pytest.approx(math.pi / 2)
    with pytest.raises(ValueError):
        Direction.normalized([0, 0])


def test_far_arc_collapses_at_twice_the_radius(two_points):
    arcs = far_supported_directions_2d(two_points, (0, 0), 1.0)
    (a, b), = arcs.arcs()
    assert a == pytest.approx(math.pi)
    assert b - a == pytest.approx(0.0, abs=1e-12)


def test_far_arc_width(two_points):
    (a, b), = far_supported_directions_2d(two_points, (0, 0), 2.0).as_degrees()
    assert a == pytest.approx(120.0)
    assert b == pytest.approx(240.0)


def test_far_arc_empty(collinear, two_points):
    assert far_supported_directions_2d(collinear, (0, 0), 5.0).is_empty
    assert far_supported_directions_2d(two_points, (0, 0), 0.9).is_empty


def test_far_arcs_on_circle_are_outward_points(circle12):
    for pos, s in enumerate(circle12.coords):
        arcs = far_supported_directions_2d(circle12, s, 1.0)
        assert not arcs.is_empty
        assert arcs.measure == pytest.approx(0.0, abs=1e-9)
        assert arcs.contains(math.atan2(s[1], s[0]), slack=1e-9)


def test_exterior_arcs_on_segment(collinear):
    arcs = exterior_sphere_directions_2d(collinear, (0, 0), 1.0)
    assert arcs.contains(math.pi / 2)
    assert arcs.contains(3 * math.pi / 2)
    assert not arcs.contains(0.0)
    assert not arcs.contains(math.pi)
    degrees = arcs.as_degrees()
    assert len(degrees) == 2
    assert degrees[0] == pytest.approx((60.0, 120.0), abs=1e-6)


def test_exterior_arcs_at_hull_interior_point(square_with_center):
    touching = exterior_sphere_directions_2d(square_with_center, (0, 0), 1.0)
    assert not touching.is_empty
    assert touching.contains(0.0, slack=1e-9)
    assert is_realized(square_with_center, (0, 0), (1, 0), 1.0).accepted
    assert exterior_sphere_directions_2d(square_with_center, (0, 0), 2.0).is_empty


def test_supporting_arcs(collinear, square, square_with_center):
    middle = supporting_directions_2d(collinear, (0, 0))
    assert middle.measure == pytest.approx(0.0, abs=1e-12)
    assert middle.contains(math.pi / 2, slack=1e-12)
    assert middle.contains(3 * math.pi / 2, slack=1e-12)
    (a, b), = supporting_directions_2d(square, (1, 1)).as_degrees()
    assert (a, b) == pytest.approx((0.0, 90.0))
    assert supporting_directions_2d(square_with_center, (0, 0)).is_empty


def test_min_norm_single_constraint(two_points):
    cert = min_norm_far_certificate(two_points, (0, 0), 1.0)
    assert cert.accepted
    assert cert.min_norm == pytest.approx(1.0)
    assert_allclose(cert.direction.coords, [-1, 0], atol=1e-9)

    loose = min_norm_far_certificate(two_points, (0, 0), 2.0)
    assert loose.accepted
    assert loose.min_norm == pytest.approx(0.5)
    assert_allclose(loose.direction.coords, [-1, 0], atol=1e-9)


def test_min_norm_square(square):
    tight = min_norm_far_certificate(square, (1, 1), SQRT2)
    assert tight.accepted
    assert tight.min_norm == pytest.approx(1.0, rel=1e-9)
    assert_allclose(tight.direction.coords, [1 / SQRT2, 1 / SQRT2], atol=1e-9)
    assert_allclose(tight.far_center, [0, 0], atol=1e-9)

    short = min_norm_far_certificate(square, (1, 1), 1.0)
    assert not short.accepted
    assert short.min_norm == pytest.approx(SQRT2, rel=1e-9)


def test_min_norm_infeasible(collinear):
    cert = min_norm_far_certificate(collinear, (0, 0), 3.0)
    assert not cert.accepted
    assert cert.direction is None
    assert math.isinf(cert.min_norm)


def test_min_norm_in_three_dimensions():
    cube = PointSet.from_points([(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)])
    r = math.sqrt(3.0)
    cert = min_norm_far_certificate(cube, (1, 1, 1), r)
    assert cert.accepted
    assert_allclose(cert.far_center, [0, 0, 0], atol=1e-8)
    assert not min_norm_far_certificate(cube, (1, 1, 1), 1.5).accepted


def test_supporting_lp(square, collinear, square_with_center):
    corner = supporting_direction_lp(square, (1, 1))
    assert corner.accepted
    assert_allclose(corner.direction.coords, [1 / SQRT2, 1 / SQRT2], atol=1e-9)

    middle = supporting_direction_lp(collinear, (0, 0))
    assert middle.accepted
    assert abs(middle.direction.coords[1]) == pytest.approx(1.0, abs=1e-6)

    end = supporting_direction_lp(collinear, (1, 0))
    assert end.accepted

    assert not supporting_direction_lp(square_with_center, (0, 0)).accepted
    wheel = PointSet.from_points(np.vstack([[0, 0], circle_points(8)]))
    assert not supporting_direction_lp(wheel, (0, 0)).accepted


def test_far_certificate_from_farthest_point(circle12):
    cert = far_certificate_from_point(circle12, (0, 0))
    assert cert.accepted
    assert cert.radius == pytest.approx(1.0)
    assert cert.base_index == 0
    assert_allclose(cert.direction.coords, [1, 0], atol=1e-12)


def test_far_certificate_from_any_point_is_accepted():
    rng = np.random.default_rng(3)
    S = PointSet.from_points(rng.uniform(-1, 1, size=(12, 2)))
    for x in rng.uniform(-3, 3, size=(20, 2)):
        assert far_certificate_from_point(S, x).accepted


def test_min_norm_agrees_with_exact_far_arcs():
    for S in random_planar_sets(seed=11, trials=40):
        tol = Tolerance.for_set(S)
        for r in (0.5, 1.0, 2.0, 5.0):
            for s in S.coords:
                qp = min_norm_far_certificate(S, s, r, tol).accepted
                arcs = not far_supported_directions_2d(S, s, r, tol).is_empty
                assert qp == arcs


def _scaled_norm(S, pos, r, theta):
    """Smallest t with t * unit_vector(theta) feasible for the far constraints, or inf."""
    v = np.delete(S.coords, pos, axis=0) - S.coords[pos]
    dist = np.linalg.norm(v, axis=1)
    slope = -(v / dist[:, None]) @ np.array([math.cos(theta), math.sin(theta)])
    if np.any(slope <= 0):
        return math.inf
    return float(np.max(dist / (2.0 * r) / slope))


def test_min_norm_reaches_the_optimum_on_a_hard_instance():
    S = list(random_planar_sets(seed=11, trials=40))[27]
    s = S.coords[10]
    arcs = far_supported_directions_2d(S, s, 2.0)
    assert not arcs.is_empty
    cert = min_norm_far_certificate(S, s, 2.0)
    assert cert.accepted
    assert cert.min_norm <= 1.0
    assert arcs.contains(cert.direction.angle, slack=1e-6)

    grid = np.linspace(0.0, 2.0 * math.pi, 20000, endpoint=False)
    best = min(_scaled_norm(S, 10, 2.0, t) for t in grid)
    assert cert.min_norm <= best + 1e-7
    assert cert.min_norm == pytest.approx(best, abs=1e-3)


@pytest.mark.parametrize('seed, trial, r, pos', [
    (11, 27, 2.0, 10), (11, 7, 1.0, 3), (11, 18, 1.0, 9), (11, 32, 1.0, 0), (11, 36, 5.0, 1),
])
def test_min_norm_is_optimal_where_far_arcs_exist(seed, trial, r, pos):
    S = list(random_planar_sets(seed=seed, trials=trial + 1))[trial]
    arcs = far_supported_directions_2d(S, S.coords[pos], r)
    cert = min_norm_far_certificate(S, S.coords[pos], r)
    assert cert.accepted == (not arcs.is_empty)
    for theta in arcs.sample_angles():
        assert cert.min_norm <= _scaled_norm(S, pos, r, theta) + 1e-7


def test_min_norm_direction_lies_in_far_arcs_on_more_seeds():
    for seed in (11, 12, 13):
        for S in random_planar_sets(seed=seed, trials=40):
            tol = Tolerance.for_set(S)
            for r in (0.5, 1.0, 2.0, 5.0):
                for s in S.coords:
                    cert = min_norm_far_certificate(S, s, r, tol)
                    arcs = far_supported_directions_2d(S, s, r, tol)
                    if cert.min_norm is not None and abs(cert.min_norm - 1.0) < 1e-6:
                        continue
                    assert cert.accepted == (not arcs.is_empty)
                    if cert.accepted and cert.min_norm < 1.0 - 1e-6:
                        assert arcs.contains(cert.direction.angle, slack=1e-9)


def test_far_normals_are_realized_at_every_radius():
    for S in random_planar_sets(seed=21, trials=30):
        tol = Tolerance.for_set(S)
        for r in (0.5, 1.0, 2.0, 5.0):
            for s in S.coords:
                cert = min_norm_far_certificate(S, s, r, tol)
                if not cert.accepted:
                    continue
                for rho in (r / 10.0, r, 10.0 * r):
                    assert is_realized(S, s, cert.direction, rho, tol).accepted


def test_direction_sets_grow_with_the_radius():
    radii = (0.5, 1.0, 2.0, 5.0)
    for S in random_planar_sets(seed=22, trials=30):
        tol = Tolerance.for_set(S)
        for s in S.coords:
            far = [far_supported_directions_2d(S, s, r, tol) for r in radii]
            ext = [exterior_sphere_directions_2d(S, s, r, tol) for r in radii]
            for small, large in zip(far, far[1:]):
                assert small.issubset(large, slack=1e-9)
            for small_r, large_r in zip(ext, ext[1:]):
                assert large_r.issubset(small_r, slack=1e-9)


def test_far_within_supporting_within_exterior():
    for S in random_planar_sets(seed=23, trials=30):
        tol = Tolerance.for_set(S)
        for s in S.coords:
            supporting = supporting_directions_2d(S, s, tol)
            for r in (0.5, 1.0, 2.0, 5.0):
                far = far_supported_directions_2d(S, s, r, tol)
                exterior = exterior_sphere_directions_2d(S, s, r, tol)
                assert far.issubset(supporting, slack=1e-9)
                assert supporting.issubset(exterior, slack=1e-9)
