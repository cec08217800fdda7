"""
Planar regions bounded by circular arcs of one common radius.

An ArcRegion is the intersection of the closed disks B(c; r) over its generators c. Each
generator's circle is clipped against every other disk; what survives is that
generator's share of the boundary (at most one arc for equal radii).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionMismatchError, EmptyRegionError, NoEnclosingBallError
from .arcset import TWO_PI, ArcSet, angle_of, normalize_angle, unit_vector
from .core import DEFAULT_ANG_EPS, PointSet, Tolerance, as_point
from .normals import CertificateKind, NormalCertificate


logger = logging.getLogger(__name__)


class Containment(str, Enum):
    INTERIOR = 'interior'
    BOUNDARY = 'boundary'
    OUTSIDE = 'outside'


@dataclass(frozen=True, eq=False)
class BoundaryArc:
    """Counterclockwise arc of the circle of radius r around ``center``; ``end`` may exceed 2*pi."""
    center: np.ndarray
    generator: int
    start: float
    end: float

    def point_at(self, theta: float, radius: float) -> np.ndarray:
        return self.center + radius * unit_vector(theta)

    def covers(self, theta: float) -> bool:
        t = normalize_angle(theta)
        return self.start <= t <= self.end or self.start <= t + TWO_PI <= self.end

    @property
    def sweep(self) -> float:
        return self.end - self.start


@dataclass(frozen=True, eq=False)
class ArcRegion:
    radius: float
    generators: np.ndarray
    boundary: Tuple[BoundaryArc, ...]
    empty_flag: bool
    ang_eps: float = DEFAULT_ANG_EPS

    @property
    def is_degenerate(self) -> bool:
        """Nonempty but without interior (two disks touching in a single point)."""
        return not self.empty_flag and sum(a.sweep for a in self.boundary) <= self.ang_eps

    @property
    def boundary_length(self) -> float:
        return self.radius * sum(a.sweep for a in self.boundary)

    def vertices(self) -> List[np.ndarray]:
        """Arc start points, i.e. the corners where consecutive arcs meet."""
        if len(self.boundary) < 2:
            return []
        return [a.point_at(a.start, self.radius) for a in self.boundary]

    def sample_boundary(self, m: int) -> List[Tuple[np.ndarray, np.ndarray]]:
        """``m`` boundary points evenly spaced by arc length, each with its arc's center."""
        if self.empty_flag:
            raise EmptyRegionError("cannot sample the boundary of an empty region")
        total = sum(a.sweep for a in self.boundary)
        samples = []
        arcs = iter(self.boundary)
        arc = next(arcs)
        consumed = 0.0
        for k in range(m):
            t = k * total / m
            while t > consumed + arc.sweep:
                consumed += arc.sweep
                arc = next(arcs)
            theta = arc.start + (t - consumed)
            samples.append((arc.point_at(theta, self.radius), arc.center))
        return samples

    def to_dict(self) -> Dict[str, Any]:
        return {
            'radius': self.radius,
            'empty': self.empty_flag,
            'generators': self.generators.tolist(),
            'boundary': [
                {'center': a.center.tolist(), 'start': normalize_angle(a.start),
                 'sweep': a.sweep}
                for a in self.boundary
            ],
        }


def _tolerance_for(coords: np.ndarray, tol: Optional[Tolerance]) -> Tolerance:
    if tol is not None:
        return tol
    span = float(np.max(np.linalg.norm(coords - coords[0], axis=1))) if len(coords) > 1 else 0.0
    return Tolerance(rel_scale=max(1.0, span))


def ball_intersection_2d(centers: Union[PointSet, Sequence[Iterable[float]]], r: float,
                         tol: Optional[Tolerance] = None) -> ArcRegion:
    """The region of points within distance r of every center."""
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    gens = centers if isinstance(centers, PointSet) else \
        PointSet.from_points(list(centers), warn_duplicates=False)
    if gens.dim != 2:
        raise DimensionMismatchError(2, gens.dim)
    coords = np.array(gens.coords)
    tol = _tolerance_for(coords, tol)

    if len(coords) == 1:
        arc = BoundaryArc(coords[0], 0, 0.0, TWO_PI)
        return ArcRegion(r, coords, (arc,), False, tol.ang_eps)

    def empty() -> ArcRegion:
        return ArcRegion(r, coords, (), True, tol.ang_eps)

    arcs: List[BoundaryArc] = []
    for j, cj in enumerate(coords):
        keep = ArcSet.full(r, tol.ang_eps)
        for i, ci in enumerate(coords):
            if i == j:
                continue
            w = ci - cj
            d = float(np.linalg.norm(w))
            q = d / (2.0 * r)
            if q - tol.band / d > 1.0:
                logger.debug("generators %d and %d are more than 2r apart", j, i)
                return empty()
            keep = keep.intersect(ArcSet.closed_arc(angle_of(w), math.acos(min(1.0, q)), r, tol.ang_eps))
            if keep.is_empty:
                break
        for a, b in keep.arcs():
            arcs.append(BoundaryArc(cj, j, a, b))

    if not arcs:
        return empty()

    mids = np.array([a.point_at(0.5 * (a.start + a.end), r) for a in arcs])
    ref = mids.mean(axis=0)
    arcs.sort(key=lambda a: angle_of(a.point_at(0.5 * (a.start + a.end), r) - ref))
    return ArcRegion(r, coords, tuple(arcs), False, tol.ang_eps)


def region_contains(region: ArcRegion, x: Iterable[float],
                    tol: Optional[Tolerance] = None) -> Containment:
    if region.empty_flag:
        return Containment.OUTSIDE
    x = as_point(x, 2)
    tol = _tolerance_for(region.generators, tol)
    worst = float(np.max(np.linalg.norm(region.generators - x, axis=1)))
    if worst < region.radius - tol.band:
        return Containment.INTERIOR
    if worst <= region.radius + tol.band:
        return Containment.BOUNDARY
    return Containment.OUTSIDE


def region_farthest_distance(region: ArcRegion, x: Iterable[float]) -> float:
    """Largest distance from ``x`` to a point of the region.

    On each boundary arc the maximum sits at the point antipodal to x through the arc's
    center when the arc covers it, otherwise at an endpoint.
    """
    if region.empty_flag:
        raise EmptyRegionError("farthest distance to an empty region is undefined")
    x = as_point(x, 2)
    r = region.radius
    best = 0.0
    for arc in region.boundary:
        w = arc.center - x
        d = float(np.linalg.norm(w))
        if d == 0.0:
            best = max(best, r)
            continue
        if arc.covers(angle_of(w)):
            best = max(best, d + r)
            continue
        for theta in (arc.start, arc.end):
            best = max(best, float(np.linalg.norm(arc.point_at(theta, r) - x)))
    return best


def _classify(value: float, r: float, band: float) -> Containment:
    if value < r - band:
        return Containment.INTERIOR
    if value <= r + band:
        return Containment.BOUNDARY
    return Containment.OUTSIDE


def ball_hull_membership(S: PointSet, r: float, x: Iterable[float],
                         tol: Optional[Tolerance] = None) -> Containment:
    """Classify x against the r-ball hull of S.

    x is in the hull iff every center c of an enclosing r-ball is within r of x, i.e. iff
    the farthest point of K = ball_intersection_2d(S, r) is within r of x.
    """
    tol = tol if tol is not None else Tolerance.for_set(S)
    K = ball_intersection_2d(S, r, tol)
    if K.empty_flag:
        raise NoEnclosingBallError(f"no closed ball of radius {r} contains the set")
    return _classify(region_farthest_distance(K, x), r, tol.band)


@dataclass(frozen=True)
class PointResidual:
    """Verification entry for one point of S."""
    index: int
    value: float
    residual: float
    containment: Optional[Containment]
    ok: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'index': self.index,
            'value': self.value,
            'residual': self.residual,
            'containment': None if self.containment is None else self.containment.value,
            'ok': self.ok,
        }


@dataclass(frozen=True, eq=False)
class CertificateBundle:
    """Per-point certificates instantiating the index sets of a theorem construction.

    Far-realized bundles carry the region A (intersection of r-balls around the far centers);
    supporting bundles carry the half-spaces {x : <zeta_s, x - s> <= 0}.
    """
    property: str
    radius: Optional[float]
    certificates: Tuple[NormalCertificate, ...]
    region: Optional[ArcRegion] = None
    half_spaces: Tuple[Tuple[np.ndarray, float], ...] = ()
    residuals: Tuple[PointResidual, ...] = ()
    verified: bool = False
    worst_residual: float = 0.0

    def centers(self) -> np.ndarray:
        return np.array([c.far_center for c in self.certificates])

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            'property': self.property,
            'radius': self.radius,
            'verified': self.verified,
            'worst_residual': self.worst_residual,
            'certificates': [c.to_dict() for c in self.certificates],
            'residuals': [r.to_dict() for r in self.residuals],
        }
        if self.region is not None:
            out['region'] = self.region.to_dict()
        if self.half_spaces:
            out['half_spaces'] = [{'normal': n.tolist(), 'offset': b} for n, b in self.half_spaces]
        return out


def certificate_region(bundle: Union[CertificateBundle, Sequence[NormalCertificate]],
                       tol: Optional[Tolerance] = None) -> ArcRegion:
    """A = intersection of B(s - r zeta_s; r) over the far-realized certificates."""
    certs = bundle.certificates if isinstance(bundle, CertificateBundle) else tuple(bundle)
    if not certs:
        raise ValueError("certificate bundle is empty")
    radii = {c.radius for c in certs}
    if any(c.kind is not CertificateKind.FAR_REALIZED for c in certs) or len(radii) != 1:
        raise ValueError("certificate_region needs far-realized certificates of one radius")
    return ball_intersection_2d([c.far_center for c in certs], radii.pop(), tol)


def support_gap(certs: Sequence[NormalCertificate], x: Iterable[float]) -> float:
    """f(x) = max <zeta_s, x - s> over supporting certificates; A = {f <= 0}."""
    if not certs:
        raise ValueError("certificate bundle is empty")
    if any(c.kind is not CertificateKind.SUPPORTING for c in certs):
        raise ValueError("support_gap needs supporting certificates")
    x = np.asarray(x, dtype=float)
    return max(float(c.direction.coords @ (x - c.base_point)) for c in certs)
