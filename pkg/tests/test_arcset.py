import math

import pytest

from spindlekit.geometry.arcset import (
    TWO_PI,
    ArcSet,
    angle_of,
    angular_distance,
    normalize_angle,
)


def test_normalize_angle():
    assert normalize_angle(-math.pi / 2) == pytest.approx(3 * math.pi / 2)
    assert normalize_angle(TWO_PI) == 0.0
    assert normalize_angle(5 * math.pi) == pytest.approx(math.pi)
    assert angle_of((0, -1)) == pytest.approx(3 * math.pi / 2)
    assert angular_distance(0.1, TWO_PI - 0.1) == pytest.approx(0.2)


def test_arc_across_zero_is_stored_split_and_reassembled():
    arc = ArcSet.closed_arc(0.0, 0.5)
    assert len(arc.intervals) == 2
    (a, b), = arc.arcs()
    assert a == pytest.approx(TWO_PI - 0.5)
    assert b == pytest.approx(TWO_PI + 0.5)
    assert arc.measure == pytest.approx(1.0)
    assert arc.contains(0.0)
    assert arc.contains(-0.4)
    assert not arc.contains(math.pi)


def test_full_and_empty():
    assert ArcSet.closed_arc(1.0, math.pi).is_full
    assert ArcSet.full().measure == pytest.approx(TWO_PI)
    assert ArcSet.empty().is_empty
    assert ArcSet.closed_arc(1.0, -0.1).is_empty


def test_touching_intervals_merge():
    arcs = ArcSet.from_intervals([(0.1, 0.2), (0.2, 0.3), (1.0, 1.5)])
    assert len(arcs.intervals) == 2
    assert arcs.intervals[0] == pytest.approx((0.1, 0.3))


def test_intersection_of_touching_arcs_is_a_point():
    left = ArcSet.closed_arc(math.pi / 2, math.pi / 4)
    right = ArcSet.closed_arc(math.pi, math.pi / 4)
    meet = left.intersect(right)
    assert not meet.is_empty
    assert meet.measure == pytest.approx(0.0, abs=1e-12)
    assert meet.contains(3 * math.pi / 4, slack=1e-12)


def test_intersection_across_zero():
    a = ArcSet.closed_arc(0.0, 0.5)
    b = ArcSet.closed_arc(0.4, 0.5)
    (lo, hi), = a.intersect(b).arcs()
    assert normalize_angle(lo) == pytest.approx(TWO_PI - 0.1)
    assert hi - lo == pytest.approx(0.6)


def test_disjoint_intersection_is_empty():
    assert ArcSet.closed_arc(0.0, 0.1).intersect(ArcSet.closed_arc(math.pi, 0.1)).is_empty


def test_remove_open_arc_keeps_endpoints():
    kept = ArcSet.full().remove_open_arc(0.0, math.pi / 2)
    (a, b), = kept.arcs()
    assert a == pytest.approx(math.pi / 2)
    assert b == pytest.approx(3 * math.pi / 2)
    assert kept.contains(math.pi / 2)
    assert not kept.contains(0.0)


def test_remove_half_circle_leaves_antipode():
    kept = ArcSet.full().remove_open_arc(0.0, math.pi)
    assert kept.measure == pytest.approx(0.0, abs=1e-12)
    assert kept.contains(math.pi, slack=1e-12)
    assert not kept.contains(math.pi / 2)


def test_sample_angles_are_endpoints_and_midpoint():
    assert ArcSet.closed_arc(1.0, 0.5).sample_angles() == pytest.approx([0.5, 1.0, 1.5])
    single = ArcSet.closed_arc(2.0, 0.0).sample_angles()
    assert single == pytest.approx([2.0])


def test_first_direction_of_wrapping_arc():
    assert angular_distance(ArcSet.closed_arc(0.0, 0.5).first_direction(), 0.0) < 1e-12
    assert ArcSet.empty().first_direction() is None


def test_endpoint_distance_and_subset():
    arc = ArcSet.closed_arc(1.0, 0.5)
    assert arc.endpoint_distance(1.2) == pytest.approx(0.3)
    assert ArcSet.closed_arc(1.0, 0.1).issubset(arc)
    assert not arc.issubset(ArcSet.closed_arc(1.0, 0.1))


def test_degrees_view():
    arc = ArcSet.closed_arc(math.pi, math.pi / 3)
    (a, b), = arc.as_degrees()
    assert a == pytest.approx(120.0)
    assert b == pytest.approx(240.0)


@pytest.mark.parametrize('arcs', [
    ArcSet.full(),
    ArcSet.closed_arc(TWO_PI - 0.25, 0.25),
    ArcSet.closed_arc(0.0, 0.3),
    ArcSet.from_intervals([(1.0, TWO_PI)]),
    ArcSet.full().remove_open_arc(1.0, 0.5),
])
def test_stored_angles_stay_below_two_pi(arcs):
    assert all(0.0 <= a <= b < TWO_PI for a, b in arcs.intervals)


def test_arc_ending_at_two_pi_wraps_to_zero():
    arcs = ArcSet.from_intervals([(1.0, TWO_PI)])
    assert arcs.intervals[0] == (0.0, 0.0)
    assert arcs.contains(0.0)
    assert arcs.contains(TWO_PI)
    (a, b), = arcs.arcs()
    assert a == pytest.approx(1.0)
    assert b == pytest.approx(TWO_PI)

    merged = ArcSet.from_intervals([(1.0, TWO_PI), (0.0, 0.5)])
    assert len(merged.intervals) == 2
    (a, b), = merged.arcs()
    assert (a, b) == pytest.approx((1.0, TWO_PI + 0.5))
    assert merged.measure == pytest.approx(TWO_PI - 0.5)
