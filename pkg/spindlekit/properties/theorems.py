"""
Certificate constructions for the convex-hull and strong-convexity representations of a
point set, the equivalent-inequality checks for far-realized normals, and the forward
shape check on arc-bounded regions.
"""

import logging
import math
import time
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ConsistencyError, DimensionMismatchError, EmptyRegionError, PreconditionError
from ..geometry.arcset import unit_vector
from ..geometry.core import PointSet, Tolerance
from ..geometry.normals import (
    Direction,
    NormalCertificate,
    far_supported_directions_2d,
    is_far_realized,
)
from ..geometry.regions import (
    CertificateBundle,
    Containment,
    PointResidual,
    ball_intersection_2d,
    certificate_region,
    region_contains,
)
from .deciders import check_exterior_infty, check_spherically_supported
from .reports import (
    PointWitness,
    Prop31Pair,
    Prop31Report,
    PropertyKind,
    PropertyReport,
    Verdict,
    worst_margin_of,
)


logger = logging.getLogger(__name__)


def _require(report: PropertyReport, what: str) -> None:
    if report.verdict is Verdict.FAILS:
        index = report.failing[0]
        raise PreconditionError(f"{what} fails at point {index}", point_index=index)


def _require_planar(S: PointSet) -> None:
    if S.dim != 2:
        raise DimensionMismatchError(2, S.dim)


def _classify(value: float, band: float) -> Containment:
    if value < -band:
        return Containment.INTERIOR
    if value <= band:
        return Containment.BOUNDARY
    return Containment.OUTSIDE


def certify_thm31(S: PointSet, tol: Optional[Tolerance] = None, threads: int = 1) -> CertificateBundle:
    """Supporting half-spaces whose intersection A is closed and convex with S on its boundary.

    f(x) = max_s <zeta_s, x - s>; every point of S must satisfy |f(s)| <= band.
    """
    tol = tol if tol is not None else Tolerance.for_set(S)
    report = check_exterior_infty(S, tol, threads)
    _require(report, "exterior infinity-sphere condition")

    certs = tuple(w.certificate for w in report.witnesses)
    normals = np.array([c.direction.coords for c in certs])
    offsets = np.einsum('ij,ij->i', normals, np.array([c.base_point for c in certs]))
    gaps = (S.coords @ normals.T - offsets[None, :]).max(axis=1)

    residuals = tuple(
        PointResidual(S.indices[pos], float(g), abs(float(g)), _classify(float(g), tol.band),
                      abs(float(g)) <= tol.band)
        for pos, g in enumerate(gaps)
    )
    worst = max(r.residual for r in residuals)
    verified = all(r.ok for r in residuals)
    logger.info("convex certification: %d half-spaces, worst |f(s)| %.3e", len(certs), worst)
    return CertificateBundle('exterior-infty', None, certs,
                             half_spaces=tuple((n, float(b)) for n, b in zip(normals, offsets)),
                             residuals=residuals, verified=verified, worst_residual=worst)


def _far_certificates_at(S: PointSet, pos: int, r: float, tol: Tolerance,
                         fallback: NormalCertificate) -> List[NormalCertificate]:
    """Certificates at the endpoints and midpoint of each far-realizing arc at S[pos]."""
    if fallback.degenerate_singleton:
        return [fallback]
    s = S.coords[pos]
    arcs = far_supported_directions_2d(S, s, r, tol)
    certs = [is_far_realized(S, s, Direction.from_angle(t), r, tol) for t in arcs.sample_angles()]
    certs = [c for c in certs if c.accepted]
    if not certs:
        logger.warning("point %d: no sampled arc direction passes, using the min-norm direction",
                       S.indices[pos])
        certs = [is_far_realized(S, s, fallback.direction, r, tol)]
    return certs


def certify_thm32(S: PointSet, r: float, tol: Optional[Tolerance] = None,
                  threads: int = 1) -> CertificateBundle:
    """A = intersection of B(s - r zeta; r) over sampled far-realizing directions.

    Each point s of S must lie on the boundary of A: max_c |s - c| = r within the band.
    """
    _require_planar(S)
    tol = tol if tol is not None else Tolerance.for_set(S)
    report = check_spherically_supported(S, r, tol, threads)
    _require(report, f"spherical support at r={r!r}")

    certs: List[NormalCertificate] = []
    for pos, witness in enumerate(report.witnesses):
        certs.extend(_far_certificates_at(S, pos, r, tol, witness.certificate))
    region = certificate_region(certs, tol)
    if region.empty_flag:
        raise ConsistencyError(f"certificate region at r={r!r} is empty although every point is far realized")

    centers = np.array([c.far_center for c in certs])
    residuals = []
    for pos, s in enumerate(S.coords):
        value = float(np.max(np.linalg.norm(centers - s, axis=1)))
        residual = value - r
        containment = region_contains(region, s, tol)
        residuals.append(PointResidual(S.indices[pos], value, residual, containment,
                                       containment is Containment.BOUNDARY))
    worst = max(abs(p.residual) for p in residuals)
    verified = all(p.ok for p in residuals)
    logger.info("strong-convexity certification at r=%g: %d centers, %d arcs, worst residual %.3e",
                r, len(certs), len(region.boundary), worst)
    return CertificateBundle('spherical-support', r, tuple(certs), region=region,
                             residuals=tuple(residuals), verified=verified, worst_residual=worst)


def default_big_radii(r: float) -> Tuple[float, ...]:
    return (0.5 * r, r, 2.0 * r, 10.0 * r)


def check_prop31(S: PointSet, r: float, R_list: Optional[Sequence[float]] = None,
                 tol: Optional[Tolerance] = None, threads: int = 1,
                 keep_pairs: bool = True) -> Prop31Report:
    """Evaluate the three equivalent inequalities for far-realized normals.

    zeta_s is the min-norm far certificate at radius r; zeta_x runs over the endpoints and
    midpoint of every far-realizing arc at x for each R. With k = (r + R) / (2rR):

        (ii)   <zeta_s - zeta_x, x - s> + k |x - s|^2             <= 0
        (iii)  |s - x| - |zeta_s - zeta_x| / k                    <= 0
        (iv)   -<zeta_s - zeta_x, x - s> - |zeta_s - zeta_x|^2 / k <= 0

    Pairs whose far set at radius R is empty are skipped and counted.
    """
    _require_planar(S)
    tol = tol if tol is not None else Tolerance.for_set(S)
    start = time.perf_counter()
    radii = tuple(float(R) for R in (R_list if R_list is not None else default_big_radii(r)))
    if not radii or any(not R > 0 for R in radii):
        raise ValueError(f"big radii must be positive, got {list(radii)}")
    report = check_spherically_supported(S, r, tol, threads)
    _require(report, f"spherical support at r={r!r}")

    zeta_s = np.array([w.certificate.direction.coords for w in report.witnesses])
    pairs: List[Prop31Pair] = []
    skipped: List[Tuple[float, int]] = []
    worst = {'ii': -math.inf, 'iii': -math.inf, 'iv': -math.inf}
    for R in radii:
        k = (r + R) / (2.0 * r * R)
        for xpos, x in enumerate(S.coords):
            arcs = far_supported_directions_2d(S, x, R, tol)
            if arcs.is_empty:
                skipped.append((R, S.indices[xpos]))
                continue
            v = x - S.coords
            sq = np.einsum('ij,ij->i', v, v)
            for theta in arcs.sample_angles():
                dz = zeta_s - unit_vector(theta)[None, :]
                dots = np.einsum('ij,ij->i', dz, v)
                dz_sq = np.einsum('ij,ij->i', dz, dz)
                ii = dots + k * sq
                iii = np.sqrt(sq) - np.sqrt(dz_sq) / k
                iv = -dots - dz_sq / k
                for item, values in (('ii', ii), ('iii', iii), ('iv', iv)):
                    worst[item] = max(worst[item], float(values.max()))
                if keep_pairs:
                    pairs.extend(
                        Prop31Pair(R, S.indices[spos], S.indices[xpos], theta,
                                   float(ii[spos]), float(iii[spos]), float(iv[spos]))
                        for spos in range(len(S))
                    )
    if skipped:
        logger.info("%d (x, R) pair(s) skipped: empty far set", len(skipped))

    # each residual combines two certificates, each accepted within the band
    result = Prop31Report(r, radii, tuple(pairs), worst, tuple(skipped), 2.0 * tol.band,
                          timing_ms=(time.perf_counter() - start) * 1000.0)
    if result.item_iv_finding:
        logger.warning("item (iv) exceeds the band by %.3e at r=%g; recorded as a finding",
                       result.max_residual['iv'], r)
    return result


def check_thm33_shape(centers: Union[PointSet, Sequence[Iterable[float]]], r: float, m: int = 128,
                      tol: Optional[Tolerance] = None) -> PropertyReport:
    """Forward shape check on K = intersection of B(c; r) over ``centers``.

    m boundary points are sampled by arc length. At a point p on the arc around c the
    outward normal (p - c)/r must be far realized over the sample with far center c. The
    details also record whether every sample classifies as a boundary point of K.
    """
    if m < 3:
        raise ValueError(f"need at least 3 boundary samples, got {m}")
    start = time.perf_counter()
    region = ball_intersection_2d(centers, r)
    if region.empty_flag:
        raise EmptyRegionError(f"the r-balls around the centers have no common point at r={r!r}")
    if region.is_degenerate:
        raise EmptyRegionError(f"the region at r={r!r} has empty interior")

    samples = region.sample_boundary(m)
    boundary = PointSet.from_points([p for p, _ in samples], warn_duplicates=False)
    tol = tol if tol is not None else Tolerance.for_set(boundary)

    witnesses = []
    for pos, p in enumerate(boundary.coords):
        generator = samples[boundary.indices[pos]][1]
        cert = is_far_realized(boundary, p, Direction.normalized(p - generator), r, tol)
        reason = None if cert.accepted else f"sample leaves B({generator.tolist()}; r)"
        witnesses.append(PointWitness(boundary.indices[pos], cert, reason))

    reproduced = all(region_contains(region, p, tol) is Containment.BOUNDARY for p in boundary.coords)
    if not reproduced:
        logger.warning("some boundary samples do not classify as boundary points of the region")
    witnesses = tuple(witnesses)
    verdict = Verdict.HOLDS if all(w.accepted for w in witnesses) else Verdict.FAILS
    logger.info("shape check on %d arcs, %d samples: %s", len(region.boundary), m, verdict.value)
    return PropertyReport(PropertyKind.STRONG_CONVEXITY_SHAPE, r, verdict, witnesses,
                          worst_margin_of(witnesses), (time.perf_counter() - start) * 1000.0,
                          details={'samples': m, 'arcs': len(region.boundary),
                                   'boundary_reproduced': reproduced,
                                   'region': region.to_dict()})
