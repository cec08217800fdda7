import math

import numpy as np
import pytest

from spindlekit.errors import DimensionMismatchError
from spindlekit.formats import Scene, render_svg, render_svg_text
from spindlekit.formats.render import _viewport
from spindlekit.geometry import PointSet
from spindlekit.geometry.normals import supporting_directions_2d
from spindlekit.properties import certify_thm32


def test_certificate_region_draws_one_dashed_circle(two_points):
    bundle = certify_thm32(two_points, 1.0)
    svg = render_svg_text(Scene(two_points, region=bundle.region, certificates=bundle.certificates))
    assert 'id="certificate-circle-0-at-1_0"' in svg
    assert 'certificate-circle-1' not in svg
    assert 'id="point-0"' in svg
    assert 'id="point-1"' in svg


def test_supporting_directions_draw_normal_ticks(collinear):
    sets = [(pos, supporting_directions_2d(collinear, s)) for pos, s in enumerate(collinear.coords)]
    svg = render_svg_text(Scene(collinear, sets, title='supporting'))
    assert 'id="normal-1-90.0"' in svg
    assert 'id="normal-1-270.0"' in svg
    assert 'id="sector-0-' in svg
    assert 'id="sector-2-' in svg


def test_output_is_byte_identical(tmp_path, square):
    bundle = certify_thm32(square, 2.0)
    scene = Scene(square, region=bundle.region, certificates=bundle.certificates, title='square')
    first = render_svg(scene, tmp_path / 'a.svg').read_bytes()
    second = render_svg(scene, tmp_path / 'b.svg').read_bytes()
    assert first == second
    assert b'region-arc-0' in first


def test_only_planar_scenes():
    cube = PointSet.from_points([(0, 0, 0), (1, 0, 0)])
    with pytest.raises(DimensionMismatchError):
        render_svg_text(Scene(cube))


def test_viewport_follows_the_diameter(two_points, square):
    center, half = _viewport(Scene(two_points), [])
    assert tuple(center) == pytest.approx((1.0, 0.0))
    assert half == pytest.approx(0.5 * 2.0 * 1.4)

    center, half = _viewport(Scene(square), [])
    assert tuple(center) == pytest.approx((0.0, 0.0))
    assert half == pytest.approx(0.5 * 2.0 * math.sqrt(2.0) * 1.4)

    widened = _viewport(Scene(two_points), [(np.array([1.0, 0.0]), 3.0)])[1]
    assert widened == pytest.approx(3.0 * 1.2)
