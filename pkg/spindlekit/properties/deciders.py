"""
Set-level property deciders.

Every decider runs one per-point certificate search and collects the results in input
index order, whatever the thread count. A singleton set gets the ``degenerate`` verdict.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

from ..errors import ConsistencyError
from ..geometry.core import PointSet, Tolerance
from ..geometry.normals import (
    CertificateKind,
    Direction,
    NormalCertificate,
    exterior_sphere_directions_2d,
    is_realized,
    min_norm_far_certificate,
    supporting_direction_lp,
)
from .oracles import oracle_direction_grid
from .reports import PointWitness, PropertyKind, PropertyReport, Verdict, worst_margin_of


logger = logging.getLogger(__name__)

T = TypeVar('T')


def _per_point(S: PointSet, work: Callable[[int], T], threads: int = 1) -> List[T]:
    """Run ``work`` on every row position; results come back in position order."""
    positions = range(len(S))
    if threads <= 1 or len(S) < 2:
        return [work(p) for p in positions]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, positions))


def _elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def _verdict(S: PointSet, witnesses: List[PointWitness]) -> Verdict:
    if len(S) == 1:
        return Verdict.DEGENERATE
    return Verdict.HOLDS if all(w.accepted for w in witnesses) else Verdict.FAILS


def _far_reason(cert: NormalCertificate) -> Optional[str]:
    if cert.accepted:
        return None
    if cert.direction is None:
        return "far-realizing constraints are infeasible"
    if cert.min_norm is not None and cert.min_norm > 1.0:
        return f"min-norm optimum {cert.min_norm!r} exceeds 1"
    return f"min-norm direction misses the band (margin {cert.margin:.3e})"


def check_spherically_supported(S: PointSet, r: float, tol: Optional[Tolerance] = None,
                                threads: int = 1) -> PropertyReport:
    """Every point of S has a unit normal far realized by an r-sphere."""
    tol = tol if tol is not None else Tolerance.for_set(S)
    start = time.perf_counter()

    def work(pos: int) -> PointWitness:
        cert = min_norm_far_certificate(S, S.coords[pos], r, tol)
        return PointWitness(S.indices[pos], cert, _far_reason(cert))

    witnesses = _per_point(S, work, threads)
    verdict = _verdict(S, witnesses)
    logger.info("spherical support at r=%g: %s", r, verdict.value)
    return PropertyReport(PropertyKind.SPHERICAL_SUPPORT, r, verdict, tuple(witnesses),
                          worst_margin_of(tuple(witnesses)), _elapsed_ms(start))


def _realized_exact(S: PointSet, pos: int, r: float, tol: Tolerance) -> PointWitness:
    s = S.coords[pos]
    arcs = exterior_sphere_directions_2d(S, s, r, tol)
    if arcs.is_empty:
        return PointWitness(S.indices[pos], None, "every direction meets the open r-ball test")
    theta = arcs.first_direction()
    cert = is_realized(S, s, Direction.from_angle(theta), r, tol)
    if cert.accepted:
        return PointWitness(S.indices[pos], cert)
    # the midpoint of a sliver arc can sit a rounding error outside the band
    for t in arcs.sample_angles():
        candidate = is_realized(S, s, Direction.from_angle(t), r, tol)
        if candidate.accepted:
            return PointWitness(S.indices[pos], candidate)
    raise ConsistencyError(
        f"point {S.indices[pos]}: realized arc set {arcs.as_degrees()} is nonempty "
        f"but no sampled direction passes (margin {cert.margin:.3e})"
    )


def _realized_grid(S: PointSet, pos: int, r: float, tol: Tolerance,
                   samples: int, seed: int) -> PointWitness:
    s = S.coords[pos]
    direction = oracle_direction_grid(S, s, r, CertificateKind.REALIZED, samples, tol, seed=seed)
    if direction is None:
        return PointWitness(S.indices[pos], None, f"no realized direction among {samples} grid directions")
    return PointWitness(S.indices[pos], is_realized(S, s, direction, r, tol))


def check_exterior_sphere(S: PointSet, r: float, tol: Optional[Tolerance] = None,
                          samples: int = 360, seed: int = 0, threads: int = 1) -> PropertyReport:
    """Every point of S has a unit normal realized by an r-sphere.

    Exact in the plane (arc coverage); in higher dimension the direction-grid oracle is
    used and the report is marked non-exact.
    """
    tol = tol if tol is not None else Tolerance.for_set(S)
    start = time.perf_counter()
    exact = S.dim == 2
    if exact:
        def work(pos: int) -> PointWitness:
            return _realized_exact(S, pos, r, tol)
    else:
        logger.warning("exterior-sphere check in dimension %d uses a %d-direction grid (not exact)",
                       S.dim, samples)

        def work(pos: int) -> PointWitness:
            return _realized_grid(S, pos, r, tol, samples, seed)

    witnesses = _per_point(S, work, threads)
    verdict = _verdict(S, witnesses)
    logger.info("exterior %g-sphere condition: %s", r, verdict.value)
    return PropertyReport(PropertyKind.EXTERIOR_SPHERE, r, verdict, tuple(witnesses),
                          worst_margin_of(tuple(witnesses)), _elapsed_ms(start), exact=exact,
                          seed=None if exact else seed,
                          details={} if exact else {'samples': samples})


def check_exterior_infty(S: PointSet, tol: Optional[Tolerance] = None,
                         threads: int = 1) -> PropertyReport:
    """Every point of S admits a supporting direction, i.e. lies on the convex hull boundary."""
    tol = tol if tol is not None else Tolerance.for_set(S)
    start = time.perf_counter()

    def work(pos: int) -> PointWitness:
        cert = supporting_direction_lp(S, S.coords[pos], tol)
        reason = None if cert.accepted else "point is interior to the convex hull"
        return PointWitness(S.indices[pos], cert, reason)

    witnesses = _per_point(S, work, threads)
    verdict = _verdict(S, witnesses)
    logger.info("exterior infinity-sphere condition: %s", verdict.value)
    return PropertyReport(PropertyKind.EXTERIOR_INFTY, None, verdict, tuple(witnesses),
                          worst_margin_of(tuple(witnesses)), _elapsed_ms(start))


def _far_feasible_everywhere(S: PointSet, r: float, tol: Tolerance) -> bool:
    return all(min_norm_far_certificate(S, s, r, tol).accepted for s in S.coords)


def threshold_scan(S: PointSet, r_lo: float, r_hi: float, steps: int = 60,
                   tol: Optional[Tolerance] = None) -> Optional[float]:
    """Smallest r in [r_lo, r_hi] at which S is r-spherically supported.

    Bisection relies on monotonicity in r (far realized at r implies far realized at every
    larger radius). Returns the upper end of the final bracket, within
    (r_hi - r_lo) / 2**steps of the threshold; None if r_hi is already infeasible.
    """
    if not 0 < r_lo < r_hi:
        raise ValueError(f"need 0 < r_lo < r_hi, got r_lo={r_lo}, r_hi={r_hi}")
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    tol = tol if tol is not None else Tolerance.for_set(S)
    if len(S) == 1:
        logger.warning("singleton set is spherically supported at every radius")
        return r_lo
    if not _far_feasible_everywhere(S, r_hi, tol):
        logger.info("not spherically supported at r_hi=%g", r_hi)
        return None
    if _far_feasible_everywhere(S, r_lo, tol):
        return r_lo

    lo, hi = r_lo, r_hi
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _far_feasible_everywhere(S, mid, tol):
            hi = mid
        else:
            lo = mid
    logger.info("threshold radius in [%.17g, %.17g]", lo, hi)
    return hi


def supported_radii(S: PointSet, radii: List[float], tol: Optional[Tolerance] = None) -> List[bool]:
    """Spherical-support verdict on a grid of radii, as booleans (degenerate counts as holding)."""
    tol = tol if tol is not None else Tolerance.for_set(S)
    if len(S) == 1:
        return [True] * len(radii)
    return [_far_feasible_everywhere(S, r, tol) for r in radii]


def monotone_in_radius(flags: List[bool]) -> bool:
    """True when a verdict sequence over increasing radii never goes from holding to failing."""
    seen = False
    for ok in flags:
        if seen and not ok:
            return False
        seen = seen or ok
    return True
