"""
Unit normals realized / far realized by r-spheres at a point of a finite set.

Per-direction predicates work in any dimension. The full direction sets are computed
exactly in the plane as ArcSets, and in general dimension through two convex programs:
a least-distance program for far-realizing directions and an LP for supporting ones.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import linprog, nnls

from ..errors import ConsistencyError, DimensionMismatchError, NotInSetError, SolverError
from .arcset import ArcSet, angle_of, unit_vector
from .core import DEFAULT_ABS_EPS, PointSet, Tolerance, farthest_normals


logger = logging.getLogger(__name__)

# nnls residual below this means the far-realizing constraints are inconsistent
_LDP_INFEASIBLE_RESIDUAL = 1e-10
# relative slack on the NNLS optimality conditions before the active-set re-solve
_KKT_EPS = 1e-9
_ACTIVE_SET_EPS = 1e-12
# a nonzero supporting cone always reaches 1 in some coordinate of the unit box
_CONE_NONZERO_THRESHOLD = 0.5


class CertificateKind(str, Enum):
    REALIZED = 'realized'
    FAR_REALIZED = 'far_realized'
    SUPPORTING = 'supporting'


@dataclass(frozen=True, eq=False)
class Direction:
    """Unit vector; the norm is checked to within ``abs_eps`` of 1."""
    coords: np.ndarray
    abs_eps: float = DEFAULT_ABS_EPS

    def __post_init__(self):
        norm = float(np.linalg.norm(self.coords))
        if abs(norm - 1.0) > self.abs_eps:
            raise ValueError(f"direction must be a unit vector, got norm {norm!r}")

    @classmethod
    def normalized(cls, v: Iterable[float]) -> 'Direction':
        v = np.asarray(v, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(v))
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(v / norm)

    @classmethod
    def from_angle(cls, theta: float) -> 'Direction':
        return cls(unit_vector(theta))

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    @property
    def angle(self) -> float:
        """Polar angle in [0, 2*pi); planar directions only."""
        return angle_of(self.coords)


@dataclass(frozen=True, eq=False)
class NormalCertificate:
    """Witness that ``direction`` is (far) realized / supporting at ``base_point``.

    ``margin`` is the worst slack of the defining inequality over the other points of S;
    a certificate is valid when ``margin >= -band``. Rejected min-norm certificates keep the
    normalized minimizer as direction, or None when the program is infeasible.
    """
    base_index: int
    base_point: np.ndarray
    direction: Optional[Direction]
    radius: Optional[float]
    kind: CertificateKind
    margin: float
    accepted: bool
    worst_index: Optional[int] = None
    min_norm: Optional[float] = None
    degenerate_singleton: bool = False

    @property
    def far_center(self) -> np.ndarray:
        if self.kind is not CertificateKind.FAR_REALIZED or self.direction is None:
            raise ValueError("only far-realized certificates define a far center")
        return self.base_point - self.radius * self.direction.coords

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            'base_index': self.base_index,
            'base_point': self.base_point.tolist(),
            'direction': None if self.direction is None else self.direction.coords.tolist(),
            'radius': self.radius,
            'kind': self.kind.value,
            'margin': self.margin,
            'accepted': self.accepted,
            'worst_index': self.worst_index,
        }
        if self.direction is not None and self.direction.dim == 2:
            out['angle'] = self.direction.angle
        if self.min_norm is not None:
            out['min_norm'] = self.min_norm
        if self.kind is CertificateKind.FAR_REALIZED and self.direction is not None:
            out['center'] = self.far_center.tolist()
        if self.degenerate_singleton:
            out['degenerate_singleton'] = True
        return out


DirectionLike = Union[Direction, Iterable[float]]


def _tol(S: PointSet, tol: Optional[Tolerance]) -> Tolerance:
    return tol if tol is not None else Tolerance.for_set(S)


def _base_position(S: PointSet, s: Iterable[float], tol: Tolerance) -> int:
    pos = S.position_of(s, tol)
    if pos is None:
        raise NotInSetError(f"base point {list(np.asarray(s, dtype=float))} is not a member of S")
    return pos


def _offsets(S: PointSet, pos: int) -> Tuple[np.ndarray, np.ndarray]:
    """Vectors x - s for the other members, and their positions in S."""
    others = np.array([i for i in range(len(S)) if i != pos], dtype=int)
    if others.size == 0:
        return np.empty((0, S.dim)), others
    return S.coords[others] - S.coords[pos], others


def _as_direction(zeta: DirectionLike, dim: int) -> Direction:
    d = zeta if isinstance(zeta, Direction) else Direction(np.asarray(zeta, dtype=float).reshape(-1))
    if d.dim != dim:
        raise DimensionMismatchError(dim, d.dim)
    return d


def _check_radius(r: float) -> None:
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")


def _evaluate(S: PointSet, pos: int, direction: Direction, kind: CertificateKind,
              r: Optional[float], tol: Tolerance) -> NormalCertificate:
    v, others = _offsets(S, pos)
    base = S.coords[pos]
    if others.size == 0:
        return NormalCertificate(pos, base, direction, r, kind, math.inf, True,
                                 degenerate_singleton=True)

    dots = v @ direction.coords
    sq = np.einsum('ij,ij->i', v, v)
    if kind is CertificateKind.REALIZED:
        slack = sq / (2.0 * r) - dots
    elif kind is CertificateKind.FAR_REALIZED:
        slack = -sq / (2.0 * r) - dots
    else:
        slack = -dots
    worst = int(np.argmin(slack))
    margin = float(slack[worst])
    return NormalCertificate(pos, base, direction, r, kind, margin, margin >= -tol.band,
                             worst_index=int(others[worst]))


def is_realized(S: PointSet, s: Iterable[float], zeta: DirectionLike, r: float,
                tol: Optional[Tolerance] = None) -> NormalCertificate:
    """Check <zeta, x - s> <= |x - s|^2 / (2r) for every x in S."""
    _check_radius(r)
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    return _evaluate(S, pos, _as_direction(zeta, S.dim), CertificateKind.REALIZED, r, tol)


def is_far_realized(S: PointSet, s: Iterable[float], zeta: DirectionLike, r: float,
                    tol: Optional[Tolerance] = None) -> NormalCertificate:
    """Check <zeta, x - s> <= -|x - s|^2 / (2r) for every x in S, i.e. S in B(s - r zeta; r)."""
    _check_radius(r)
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    direction = _as_direction(zeta, S.dim)
    cert = _evaluate(S, pos, direction, CertificateKind.FAR_REALIZED, r, tol)

    # radius r|zeta| makes the two tests algebraically identical for near-unit zeta
    center = S.coords[pos] - r * direction.coords
    reach = r * float(np.linalg.norm(direction.coords))
    excess = float(np.max(np.linalg.norm(S.coords - center, axis=1))) - reach
    scale_eps = 1e-12 * max(tol.rel_scale, r)
    if (cert.accepted and excess > 2.0 * tol.band + scale_eps) or \
            (not cert.accepted and excess < -scale_eps):
        raise ConsistencyError(
            f"far inequality (margin {cert.margin:.3e}) disagrees with ball containment "
            f"(excess {excess:.3e}) at point {S.indices[pos]}"
        )
    return cert


def is_supporting(S: PointSet, s: Iterable[float], zeta: DirectionLike,
                  tol: Optional[Tolerance] = None) -> NormalCertificate:
    """Check <zeta, x - s> <= 0 for every x in S (the radius -> infinity limit)."""
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    return _evaluate(S, pos, _as_direction(zeta, S.dim), CertificateKind.SUPPORTING, None, tol)


def _polar_offsets(S: PointSet, pos: int) -> Tuple[np.ndarray, np.ndarray]:
    if S.dim != 2:
        raise DimensionMismatchError(2, S.dim)
    v, _ = _offsets(S, pos)
    return np.linalg.norm(v, axis=1), np.arctan2(v[:, 1], v[:, 0])


def far_supported_directions_2d(S: PointSet, s: Iterable[float], r: float,
                                tol: Optional[Tolerance] = None) -> ArcSet:
    """Angles of the unit directions far realized by an r-sphere at s.

    Each other point x contributes the closed arc of half-width arccos(|x - s| / 2r)
    centred on the direction of s - x.
    """
    _check_radius(r)
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    dist, phi = _polar_offsets(S, pos)
    result = ArcSet.full(r, tol.ang_eps)
    for d, p in zip(dist, phi):
        q = d / (2.0 * r)
        if q - tol.band / d > 1.0:
            return ArcSet.empty(r, tol.ang_eps)
        result = result.intersect(ArcSet.closed_arc(p + math.pi, math.acos(min(1.0, q)), r, tol.ang_eps))
        if result.is_empty:
            break
    return result


def exterior_sphere_directions_2d(S: PointSet, s: Iterable[float], r: float,
                                  tol: Optional[Tolerance] = None) -> ArcSet:
    """Angles of the unit directions realized by an r-sphere at s.

    Each other point x forbids the open arc of half-width arccos(|x - s| / 2r) around the
    direction of x - s; tangency stays feasible because the excluded ball is open. The
    forbidden arcs are narrowed by ang_eps so tangent directions shared by two forbidden
    arcs survive rounding.
    """
    _check_radius(r)
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    dist, phi = _polar_offsets(S, pos)
    result = ArcSet.full(r, tol.ang_eps)
    for d, p in zip(dist, phi):
        q = d / (2.0 * r)
        if q + tol.band / d >= 1.0:
            continue
        result = result.remove_open_arc(p, math.acos(q) - tol.ang_eps)
        if result.is_empty:
            break
    return result


def supporting_directions_2d(S: PointSet, s: Iterable[float],
                             tol: Optional[Tolerance] = None) -> ArcSet:
    """Angles of the unit directions with <zeta, x - s> <= 0 over S."""
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    _, phi = _polar_offsets(S, pos)
    result = ArcSet.full(None, tol.ang_eps)
    for p in phi:
        result = result.intersect(ArcSet.closed_arc(p + math.pi, 0.5 * math.pi, None, tol.ang_eps))
        if result.is_empty:
            break
    return result


def _first_axis(dim: int) -> Direction:
    e = np.zeros(dim)
    e[0] = 1.0
    return Direction(e)


def _nnls_is_optimal(E: np.ndarray, f: np.ndarray, weights: np.ndarray) -> bool:
    """Optimality conditions of min |E w - f| over w >= 0.

    The gradient E^T (E w - f) must be nonnegative, and zero wherever a weight is positive.
    """
    grad = E.T @ (E @ weights - f)
    eps = _KKT_EPS * max(1.0, float(np.abs(E).max()))
    return bool(np.all(grad >= -eps) and np.all(np.abs(grad[weights > 0]) <= eps))


def _least_norm_active_set(A: np.ndarray, b: np.ndarray, max_iter: int) -> Optional[np.ndarray]:
    """Primal active-set solve of min |z| subject to A z <= b; None when infeasible.

    Starts from a feasible point found by LP. A blocking constraint always has its normal
    outside the span of the working rows, so the equality-constrained step is a
    minimum-norm least-squares solve.
    """
    m, n = A.shape
    start = linprog(np.zeros(n), A_ub=A, b_ub=b, bounds=[(None, None)] * n, method='highs')
    if start.status == 2:
        return None
    if start.status != 0:
        raise SolverError(f"least-distance start LP failed: {start.message}")

    z = np.asarray(start.x, dtype=float)
    eps = _ACTIVE_SET_EPS * max(1.0, float(np.abs(b).max()))
    working: List[int] = []
    limit = max(max_iter, 10 * (m + n))
    for _ in range(limit):
        if working:
            target = np.linalg.lstsq(A[working], b[working], rcond=None)[0]
        else:
            target = np.zeros(n)
        step = target - z
        step_norm = float(np.linalg.norm(step))

        if step_norm <= eps:
            z = target
            if not working:
                return z
            # z + A_W^T mu = 0 with mu >= 0 at the optimum
            mu = np.linalg.lstsq(A[working].T, -z, rcond=None)[0]
            k = int(np.argmin(mu))
            if mu[k] >= -eps:
                return z
            working.pop(k)
            continue

        along = A @ step
        along[working] = 0.0
        blocking = np.flatnonzero(along > _ACTIVE_SET_EPS * step_norm)
        alpha, hit = 1.0, None
        if blocking.size:
            ratios = np.maximum(b[blocking] - A[blocking] @ z, 0.0) / along[blocking]
            j = int(np.argmin(ratios))
            if ratios[j] < 1.0:
                alpha, hit = float(ratios[j]), int(blocking[j])
        z = z + alpha * step
        if hit is not None:
            working.append(hit)
    raise SolverError(f"active-set least-distance solve did not converge in {limit} steps")


def min_norm_far_certificate(S: PointSet, s: Iterable[float], r: float,
                             tol: Optional[Tolerance] = None,
                             max_iter_factor: int = 100) -> NormalCertificate:
    """Far-realizing direction from the least-distance program

        minimize |zeta|^2  subject to  <zeta, u_x> <= -|x - s| / (2r),  u_x = (x - s)/|x - s|.

    A unit far-realizing direction exists iff the program is feasible with optimum <= 1
    (scaling a feasible zeta by t >= 1 keeps it feasible). Solved as a Lawson-Hanson
    least-distance problem through NNLS. An NNLS result that misses its optimality
    conditions is discarded and the program is re-solved by a primal active-set method.
    """
    _check_radius(r)
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    v, _ = _offsets(S, pos)
    base = S.coords[pos]
    if len(v) == 0:
        return NormalCertificate(pos, base, _first_axis(S.dim), r, CertificateKind.FAR_REALIZED,
                                 math.inf, True, min_norm=0.0, degenerate_singleton=True)

    dist = np.linalg.norm(v, axis=1)
    units = v / dist[:, None]
    rhs = dist / (2.0 * r)

    # least distance: min |z| s.t. G z >= h, with G = -units, h = rhs
    m, n = units.shape
    E = np.vstack([-units.T, rhs[None, :]])
    f = np.zeros(n + 1)
    f[-1] = 1.0
    try:
        weights, _ = nnls(E, f, maxiter=max_iter_factor * m)
    except RuntimeError as e:
        raise SolverError(f"min-norm program did not converge at point {S.indices[pos]}: {e}") from None
    residual = E @ weights - f
    if not np.all(np.isfinite(residual)):
        raise SolverError(f"min-norm program produced non-finite values at point {S.indices[pos]}")

    if float(np.linalg.norm(residual)) <= _LDP_INFEASIBLE_RESIDUAL:
        # f in the cone spanned by the columns of E certifies infeasibility
        zeta = None
    elif residual[-1] < 0 and _nnls_is_optimal(E, f, weights):
        zeta = -residual[:-1] / residual[-1]
    else:
        logger.debug("point %s: NNLS stopped short of optimality, re-solving by active set",
                     S.indices[pos])
        zeta = _least_norm_active_set(units, -rhs, max_iter_factor * m)

    if zeta is None:
        logger.debug("point %s: far constraints infeasible at r=%g", S.indices[pos], r)
        return NormalCertificate(pos, base, None, r, CertificateKind.FAR_REALIZED, -math.inf,
                                 False, min_norm=math.inf)

    norm = float(np.linalg.norm(zeta))
    direction = Direction.normalized(zeta)
    cert = _evaluate(S, pos, direction, CertificateKind.FAR_REALIZED, r, tol)
    feasible = norm * norm <= 1.0 + tol.abs_eps
    if feasible and not cert.accepted:
        logger.debug("point %s: min norm %.17g accepted but margin %.3e out of band",
                     S.indices[pos], norm, cert.margin)
    return NormalCertificate(pos, base, direction, r, CertificateKind.FAR_REALIZED, cert.margin,
                             feasible and cert.accepted, worst_index=cert.worst_index,
                             min_norm=norm)


def _nonzero_cone_point(units: np.ndarray, slack: np.ndarray) -> Optional[np.ndarray]:
    """Some z != 0 in the unit box with <u_i, z> <= slack_i, or None."""
    m, n = units.shape
    bounds = [(-1.0, 1.0)] * n
    for j in range(n):
        for sign in (1.0, -1.0):
            c = np.zeros(n)
            c[j] = -sign
            res = linprog(c, A_ub=units, b_ub=slack, bounds=bounds, method='highs')
            if res.status != 0:
                raise SolverError(f"supporting cone LP failed: {res.message}")
            if -res.fun >= _CONE_NONZERO_THRESHOLD:
                return res.x
    return None


def supporting_direction_lp(S: PointSet, s: Iterable[float],
                            tol: Optional[Tolerance] = None) -> NormalCertificate:
    """Supporting direction from the LP

        maximize delta  subject to  <zeta, x - s> <= -delta |x - s|,  |zeta|_inf <= 1.

    zeta = 0 is always feasible with delta = 0, so a zero optimum is resolved by searching
    the cone {<zeta, u_x> <= 0} for a nonzero point.
    """
    tol = _tol(S, tol)
    pos = _base_position(S, s, tol)
    v, _ = _offsets(S, pos)
    base = S.coords[pos]
    if len(v) == 0:
        return NormalCertificate(pos, base, _first_axis(S.dim), None, CertificateKind.SUPPORTING,
                                 math.inf, True, degenerate_singleton=True)

    dist = np.linalg.norm(v, axis=1)
    units = v / dist[:, None]
    m, n = units.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([units, np.ones((m, 1))])
    bounds = [(-1.0, 1.0)] * n + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), bounds=bounds, method='highs')
    if res.status != 0:
        raise SolverError(f"supporting LP failed at point {S.indices[pos]}: {res.message}")

    delta = -float(res.fun)
    delta_eps = tol.band / float(dist.max())
    if delta > delta_eps:
        zeta = res.x[:n]
    elif delta >= -delta_eps:
        zeta = _nonzero_cone_point(units, tol.band / dist)
    else:
        zeta = None

    if zeta is None or not np.any(zeta):
        return NormalCertificate(pos, base, None, None, CertificateKind.SUPPORTING, delta, False)
    return _evaluate(S, pos, Direction.normalized(zeta), CertificateKind.SUPPORTING, None, tol)


def far_certificate_from_point(S: PointSet, x: Iterable[float],
                               tol: Optional[Tolerance] = None) -> NormalCertificate:
    """Far certificate at the first farthest point s of x, radius |s - x|, direction s - x."""
    tol = _tol(S, tol)
    pos, normal = farthest_normals(x, S, tol)[0]
    radius = float(np.linalg.norm(normal))
    if radius == 0:
        raise ValueError("x coincides with the only point of S")
    return is_far_realized(S, S.coords[pos], Direction.normalized(normal), radius, tol)
