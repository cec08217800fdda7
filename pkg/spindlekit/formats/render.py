"""
Deterministic SVG scenes of planar point sets, direction sets and arc regions.

Elements carry ids (matplotlib ``gid``) so the output can be inspected:
``point-<i>``, ``sector-<i>-<deg>-<deg>``, ``normal-<i>-<deg>``,
``certificate-circle-<k>-at-<x>_<y>`` and ``region-arc-<k>``.
"""

import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from matplotlib.patches import Arc, Circle, Wedge
import numpy as np

from ..errors import DimensionMismatchError
from ..geometry.arcset import ArcSet, unit_vector
from ..geometry.core import PointSet, diameter
from ..geometry.normals import CertificateKind, NormalCertificate
from ..geometry.regions import ArcRegion


logger = logging.getLogger(__name__)

MARGIN = 0.2
SECTOR_SCALE = 0.08
TICK_SCALE = 0.1
CENTER_MERGE = 1e-9

_RC = {
    'svg.hashsalt': 'spindlekit',
    'svg.fonttype': 'none',
    'path.simplify': False,
}


@dataclass
class Scene:
    """What to draw: points, per-point direction sets, a region and certificate circles."""
    points: PointSet
    direction_sets: Sequence[Tuple[int, ArcSet]] = ()
    region: Optional[ArcRegion] = None
    certificates: Sequence[NormalCertificate] = ()
    title: Optional[str] = None
    extra_circles: List[Tuple[np.ndarray, float]] = field(default_factory=list)


def _circles(scene: Scene) -> List[Tuple[np.ndarray, float]]:
    """Distinct certificate circles (center, radius) in certificate order."""
    out: List[Tuple[np.ndarray, float]] = []
    for cert in scene.certificates:
        if cert.kind is not CertificateKind.FAR_REALIZED or cert.direction is None:
            continue
        c = cert.far_center
        if any(np.linalg.norm(c - d) <= CENTER_MERGE and r == cert.radius for d, r in out):
            continue
        out.append((c, cert.radius))
    return out + list(scene.extra_circles)


def _viewport(scene: Scene, circles: Sequence[Tuple[np.ndarray, float]]) -> Tuple[np.ndarray, float]:
    """Center and half-width of the square view.

    The view is centred on the bounding box of S with half-width 0.5 * diam S * (1 + 2 * MARGIN).
    Certificate circles and the region widen it only when they reach further.
    """
    coords = scene.points.coords
    center = 0.5 * (coords.min(axis=0) + coords.max(axis=0))
    half = 0.5 * (diameter(scene.points) or 1.0) * (1.0 + 2.0 * MARGIN)
    reach = [float(np.abs(c - center).max()) + r for c, r in circles]
    if scene.region is not None and not scene.region.empty_flag:
        # the region lies inside every generating disk
        reach.append(min(float(np.abs(g - center).max()) for g in scene.region.generators)
                     + scene.region.radius)
    if reach:
        half = max(half, max(reach) * (1.0 + MARGIN))
    return center, half


def _fmt(x: float) -> str:
    if abs(x) < CENTER_MERGE:
        x = 0.0
    return f"{x:.6g}".replace('-', 'm')


def _draw(ax, scene: Scene, half: float) -> None:
    S = scene.points
    sector = SECTOR_SCALE * half
    tick = TICK_SCALE * half

    for pos, arcs in scene.direction_sets:
        s = S.coords[pos]
        index = S.indices[pos]
        for a, b in arcs.arcs():
            da, db = math.degrees(a), math.degrees(b)
            if b - a > arcs.ang_eps:
                ax.add_patch(Wedge(tuple(s), sector, da, db, facecolor='tab:green', alpha=0.35,
                                   edgecolor='none', gid=f"sector-{index}-{da:.1f}-{db:.1f}"))
                continue
            end = s + tick * unit_vector(a)
            ax.plot([s[0], end[0]], [s[1], end[1]], color='tab:green', linewidth=1.0,
                    gid=f"normal-{index}-{da % 360.0:.1f}")

    for k, (c, r) in enumerate(_circles(scene)):
        ax.add_patch(Circle(tuple(c), r, fill=False, linestyle='--', linewidth=0.8,
                            edgecolor='tab:blue', gid=f"certificate-circle-{k}-at-{_fmt(c[0])}_{_fmt(c[1])}"))

    if scene.region is not None and not scene.region.empty_flag:
        r = scene.region.radius
        for k, arc in enumerate(scene.region.boundary):
            ax.add_patch(Arc(tuple(arc.center), 2 * r, 2 * r, theta1=math.degrees(arc.start),
                             theta2=math.degrees(arc.end), edgecolor='tab:red', linewidth=1.4,
                             gid=f"region-arc-{k}"))

    for pos, s in enumerate(S.coords):
        ax.plot([s[0]], [s[1]], marker='o', markersize=2, color='black', linestyle='none',
                gid=f"point-{S.indices[pos]}")


def render_svg_text(scene: Scene) -> str:
    """The scene as SVG text; identical scenes give identical bytes."""
    if scene.points.dim != 2:
        raise DimensionMismatchError(2, scene.points.dim)
    circles = _circles(scene)
    center, half = _viewport(scene, circles)
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 6))
        try:
            _draw(ax, scene, half)
            ax.set_xlim(center[0] - half, center[0] + half)
            ax.set_ylim(center[1] - half, center[1] + half)
            ax.set_aspect('equal')
            if scene.title:
                ax.set_title(scene.title)
            buffer = io.StringIO()
            fig.savefig(buffer, format='svg', metadata={'Date': None})
        finally:
            plt.close(fig)
    return buffer.getvalue()


def render_svg(scene: Scene, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(render_svg_text(scene))
    logger.info("wrote %s", path)
    return path
