"""
Vector geometry over finite point sets: distances, projections, farthest points and the
shared tolerance policy.

All functions are pure over immutable inputs.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

from ..errors import DimensionMismatchError, InputError


logger = logging.getLogger(__name__)

Point = np.ndarray

DEFAULT_ABS_EPS = 1e-9
DEFAULT_ANG_EPS = 1e-12
DEDUP_TOLERANCE = 1e-12

# Above this size diameter() first reduces to convex hull vertices.
_HULL_REDUCTION_MIN = 64


def as_point(x: Iterable[float], dim: Optional[int] = None) -> Point:
    """Validate and copy ``x`` into a float vector."""
    p = np.asarray(x, dtype=float).reshape(-1)
    if dim is not None and p.shape[0] != dim:
        raise DimensionMismatchError(dim, p.shape[0])
    if p.shape[0] < 2:
        raise InputError(f"points need at least 2 coordinates, got {p.shape[0]}")
    if not np.all(np.isfinite(p)):
        raise InputError("point coordinates must be finite")
    return p


@dataclass(frozen=True)
class Tolerance:
    """Tolerance policy shared by every predicate.

    ``band`` (abs_eps * rel_scale) is the slack applied to squared-distance ties and to
    inequality margins; ``ang_eps`` merges angular interval endpoints.
    """
    abs_eps: float = DEFAULT_ABS_EPS
    rel_scale: float = 1.0
    ang_eps: float = DEFAULT_ANG_EPS

    def __post_init__(self):
        if not self.abs_eps > 0:
            raise ValueError(f"abs_eps must be positive, got {self.abs_eps}")
        if not self.ang_eps > 0:
            raise ValueError(f"ang_eps must be positive, got {self.ang_eps}")
        if not self.rel_scale >= 1:
            raise ValueError(f"rel_scale must be >= 1, got {self.rel_scale}")

    @property
    def band(self) -> float:
        return self.abs_eps * self.rel_scale

    @classmethod
    def for_set(cls, S: 'PointSet', abs_eps: float = DEFAULT_ABS_EPS,
                ang_eps: float = DEFAULT_ANG_EPS) -> 'Tolerance':
        return cls(abs_eps=abs_eps, rel_scale=max(1.0, diameter(S)), ang_eps=ang_eps)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite set of points in R^dim with stable input indices.

    Build with ``PointSet.from_points``; duplicates within ``dedup_tolerance`` are merged
    keeping the lowest index.
    """
    coords: np.ndarray
    indices: Tuple[int, ...]
    labels: Optional[Tuple[str, ...]] = None
    dedup_tolerance: float = DEDUP_TOLERANCE
    duplicates_merged: int = 0

    @classmethod
    def from_points(cls, points: Sequence[Iterable[float]],
                    labels: Optional[Sequence[str]] = None,
                    dedup_tolerance: float = DEDUP_TOLERANCE,
                    warn_duplicates: bool = True) -> 'PointSet':
        """Ingest points, merging duplicates; merges are logged as a warning unless
        ``warn_duplicates`` is off (internal sets such as certificate centers)."""
        if len(points) == 0:
            raise InputError("point set is empty")
        if labels is not None and len(labels) != len(points):
            raise InputError(f"{len(labels)} labels for {len(points)} points", path=".labels")

        first = as_point(points[0])
        dim = first.shape[0]
        rows = [first]
        for i, p in enumerate(points[1:], start=1):
            try:
                rows.append(as_point(p, dim))
            except DimensionMismatchError as e:
                raise InputError(str(e), path=f".points[{i}]") from None

        kept: List[int] = []
        buffer = np.empty((len(rows), dim))
        for i, p in enumerate(rows):
            n = len(kept)
            if n and np.min(np.linalg.norm(buffer[:n] - p, axis=1)) <= dedup_tolerance:
                continue
            buffer[n] = p
            kept.append(i)

        merged = len(rows) - len(kept)
        if merged:
            level = logging.WARNING if warn_duplicates else logging.DEBUG
            logger.log(level, "merged %d duplicate point(s)", merged)
        coords = np.array(buffer[:len(kept)])
        coords.flags.writeable = False
        kept_labels = tuple(str(labels[i]) for i in kept) if labels is not None else None
        return cls(coords=coords, indices=tuple(kept), labels=kept_labels,
                   dedup_tolerance=dedup_tolerance, duplicates_merged=merged)

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.coords.shape[0]

    def __iter__(self) -> Iterator[Point]:
        return iter(self.coords)

    def point(self, position: int) -> Point:
        return self.coords[position]

    def position_of(self, s: Iterable[float], tol: Optional[Tolerance] = None) -> Optional[int]:
        """Row position of the member equal to ``s`` (within the tolerance band), if any."""
        s = as_point(s, self.dim)
        band = (tol or Tolerance()).band
        d = np.linalg.norm(self.coords - s, axis=1)
        pos = int(np.argmin(d))
        return pos if d[pos] <= max(band, self.dedup_tolerance) else None

    def label(self, position: int) -> str:
        if self.labels is not None:
            return self.labels[position]
        return str(self.indices[position])


@dataclass(frozen=True, eq=False)
class Ball:
    center: Point
    radius: float
    closed: bool = True

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")

    def contains(self, x: Iterable[float], slack: float = 0.0) -> bool:
        d = float(np.linalg.norm(as_point(x, self.center.shape[0]) - self.center))
        if self.closed:
            return d <= self.radius + slack
        return d < self.radius - slack


def _check_dim(x: Point, S: PointSet) -> Point:
    return as_point(x, S.dim)


def _squared_distances(x: Point, S: PointSet) -> np.ndarray:
    diff = S.coords - _check_dim(x, S)
    return np.einsum('ij,ij->i', diff, diff)


def distance_to_set(x: Iterable[float], S: PointSet) -> float:
    """d_S(x): Euclidean distance from ``x`` to the nearest member of ``S``."""
    return math.sqrt(float(np.min(_squared_distances(x, S))))


def farthest_distance(x: Iterable[float], S: PointSet) -> float:
    """d^f_S(x): distance from ``x`` to the farthest member of ``S``."""
    return math.sqrt(float(np.max(_squared_distances(x, S))))


def _resolve(S: PointSet, tol: Optional[Tolerance]) -> Tolerance:
    return tol if tol is not None else Tolerance.for_set(S)


def projection_positions(x: Iterable[float], S: PointSet,
                         tol: Optional[Tolerance] = None) -> List[int]:
    d2 = _squared_distances(x, S)
    band = _resolve(S, tol).band
    return [int(i) for i in np.flatnonzero(d2 <= d2.min() + band)]


def farthest_positions(x: Iterable[float], S: PointSet,
                       tol: Optional[Tolerance] = None) -> List[int]:
    d2 = _squared_distances(x, S)
    band = _resolve(S, tol).band
    return [int(i) for i in np.flatnonzero(d2 >= d2.max() - band)]


def projections(x: Iterable[float], S: PointSet, tol: Optional[Tolerance] = None) -> List[Point]:
    """proj_S(x) in index order; ties within the tolerance band on squared distances."""
    return [S.coords[i] for i in projection_positions(x, S, tol)]


def farthest_points(x: Iterable[float], S: PointSet, tol: Optional[Tolerance] = None) -> List[Point]:
    """far_S(x) in index order; ties within the tolerance band on squared distances."""
    return [S.coords[i] for i in farthest_positions(x, S, tol)]


def proximal_normals(x: Iterable[float], S: PointSet,
                     tol: Optional[Tolerance] = None) -> List[Tuple[int, np.ndarray]]:
    """Pairs (position of s, x - s) for s in proj_S(x); each x - s lies in N^P_S(s)."""
    x = _check_dim(x, S)
    return [(i, x - S.coords[i]) for i in projection_positions(x, S, tol)]


def farthest_normals(x: Iterable[float], S: PointSet,
                     tol: Optional[Tolerance] = None) -> List[Tuple[int, np.ndarray]]:
    """Pairs (position of s, s - x) for s in far_S(x); each s - x lies in N^P_S(s)."""
    x = _check_dim(x, S)
    return [(i, S.coords[i] - x) for i in farthest_positions(x, S, tol)]


def _hull_vertices(coords: np.ndarray) -> np.ndarray:
    try:
        return coords[ConvexHull(coords).vertices]
    except Exception as e:  # degenerate (flat) inputs make qhull refuse
        logger.debug("hull reduction skipped: %s", e)
        return coords


def diameter(S: PointSet) -> float:
    """Largest pairwise distance; 0 for a singleton."""
    coords = S.coords
    if len(coords) < 2:
        return 0.0
    if len(coords) > _HULL_REDUCTION_MIN and S.dim <= 3:
        coords = _hull_vertices(coords)
    if len(coords) <= 2000:
        return float(np.max(pdist(coords)))
    best = 0.0
    for i in range(len(coords) - 1):
        best = max(best, float(np.max(np.linalg.norm(coords[i + 1:] - coords[i], axis=1))))
    return best
