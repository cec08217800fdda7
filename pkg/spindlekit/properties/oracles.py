"""
Brute-force direction-grid oracles.

They share nothing with the exact deciders except the per-direction inequality, so they
serve as an independent cross-check. Grids: equally spaced angles in the plane, a
Fibonacci lattice on the sphere, seeded Gaussian directions beyond three dimensions.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..geometry.arcset import TWO_PI, ArcSet
from ..geometry.core import PointSet, Tolerance
from ..geometry.normals import (
    CertificateKind,
    Direction,
    exterior_sphere_directions_2d,
    far_supported_directions_2d,
    supporting_directions_2d,
)
from ..errors import DimensionMismatchError, NotInSetError


logger = logging.getLogger(__name__)

ENDPOINT_WINDOW = 1e-3
MIN_GRID = 8

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def fibonacci_sphere(m: int, offset: float = 0.0) -> np.ndarray:
    k = np.arange(m) + 0.5
    z = 1.0 - 2.0 * k / m
    rho = np.sqrt(1.0 - z * z)
    phi = _GOLDEN_ANGLE * k + offset
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def direction_grid(dim: int, m: int, offset: float = 0.0, seed: int = 0) -> np.ndarray:
    """``m`` unit directions in R^dim, as rows."""
    if m < MIN_GRID:
        raise ValueError(f"grid needs at least {MIN_GRID} directions, got {m}")
    if dim == 2:
        theta = offset + TWO_PI * np.arange(m) / m
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if dim == 3:
        return fibonacci_sphere(m, offset)
    if dim < 2:
        raise DimensionMismatchError(2, dim)
    g = np.random.default_rng(seed).standard_normal((m, dim))
    return g / np.linalg.norm(g, axis=1)[:, None]


def passing_mask(S: PointSet, position: int, directions: np.ndarray, kind: CertificateKind,
                 r: Optional[float], band: float) -> np.ndarray:
    """Boolean mask of the grid directions satisfying the defining inequality at S[position]."""
    others = [i for i in range(len(S)) if i != position]
    if not others:
        return np.ones(len(directions), dtype=bool)
    v = S.coords[others] - S.coords[position]
    sq = np.einsum('ij,ij->i', v, v)
    dots = directions @ v.T
    if kind is CertificateKind.REALIZED:
        slack = sq[None, :] / (2.0 * r) - dots
    elif kind is CertificateKind.FAR_REALIZED:
        slack = -sq[None, :] / (2.0 * r) - dots
    else:
        slack = -dots
    return slack.min(axis=1) >= -band


def oracle_direction_grid(S: PointSet, s, r: Optional[float], kind: CertificateKind,
                          m: int = 360, tol: Optional[Tolerance] = None,
                          offset: float = 0.0, seed: int = 0) -> Optional[Direction]:
    """First grid direction passing the exact per-direction check, or None."""
    tol = tol if tol is not None else Tolerance.for_set(S)
    position = S.position_of(s, tol)
    if position is None:
        raise NotInSetError("oracle base point is not a member of S")
    grid = direction_grid(S.dim, m, offset, seed)
    mask = passing_mask(S, position, grid, CertificateKind(kind), r, tol.band)
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return None
    return Direction.normalized(grid[hits[0]])


def exact_direction_set(S: PointSet, s, r: Optional[float], kind: CertificateKind,
                        tol: Optional[Tolerance] = None) -> ArcSet:
    kind = CertificateKind(kind)
    if kind is CertificateKind.REALIZED:
        return exterior_sphere_directions_2d(S, s, r, tol)
    if kind is CertificateKind.FAR_REALIZED:
        return far_supported_directions_2d(S, s, r, tol)
    return supporting_directions_2d(S, s, tol)


@dataclass
class OracleAgreement:
    """Exact-vs-grid comparison over every point of a planar set."""
    kind: CertificateKind
    radius: Optional[float]
    samples: int
    seed: int
    probes: int = 0
    disagreements: int = 0
    near_endpoint: int = 0
    verdict_mismatches: List[int] = field(default_factory=list)

    @property
    def agrees(self) -> bool:
        return self.disagreements == 0 and not self.verdict_mismatches

    @property
    def near_endpoint_fraction(self) -> float:
        return self.near_endpoint / self.probes if self.probes else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'radius': self.radius,
            'samples': self.samples,
            'seed': self.seed,
            'probes': self.probes,
            'disagreements': self.disagreements,
            'near_endpoint': self.near_endpoint,
            'verdict_mismatches': list(self.verdict_mismatches),
            'agrees': self.agrees,
        }


def cross_validate(S: PointSet, r: Optional[float], kind: CertificateKind, samples: int = 360,
                   seed: int = 0, tol: Optional[Tolerance] = None) -> OracleAgreement:
    """Compare exact ArcSet membership with the direct predicate on a seeded, rotated grid.

    Disagreements within ENDPOINT_WINDOW of an arc endpoint are counted separately. A
    point whose exact set is nonempty but narrower than the grid spacing is not a verdict
    mismatch when the grid misses it.
    """
    if S.dim != 2:
        raise DimensionMismatchError(2, S.dim)
    kind = CertificateKind(kind)
    tol = tol if tol is not None else Tolerance.for_set(S)
    offset = float(np.random.default_rng(seed).uniform(0.0, TWO_PI / samples))
    grid = direction_grid(2, samples, offset)
    angles = (offset + TWO_PI * np.arange(samples) / samples) % TWO_PI
    spacing = TWO_PI / samples

    result = OracleAgreement(kind, r, samples, seed)
    for position in range(len(S)):
        exact = exact_direction_set(S, S.coords[position], r, kind, tol)
        mask = passing_mask(S, position, grid, kind, r, tol.band)
        for theta, passed in zip(angles, mask):
            result.probes += 1
            if exact.contains(theta) == bool(passed):
                continue
            if exact.endpoint_distance(theta) <= ENDPOINT_WINDOW:
                result.near_endpoint += 1
                logger.debug("point %d: grid/exact differ %.2e rad from an arc endpoint",
                             S.indices[position], exact.endpoint_distance(theta))
            else:
                result.disagreements += 1
                logger.warning("point %d: grid and exact sets disagree at angle %.6f",
                               S.indices[position], theta)
        widest = max((b - a for a, b in exact.arcs()), default=-1.0)
        if exact.is_empty == bool(mask.any()) and (mask.any() or widest >= 2.0 * spacing):
            result.verdict_mismatches.append(S.indices[position])
    if result.near_endpoint:
        logger.warning("%d of %d probes differ only near arc endpoints",
                       result.near_endpoint, result.probes)
    return result


def grid_verdict_mismatches(S: PointSet, accepted: List[bool], r: Optional[float],
                            kind: CertificateKind, samples: int = 360, seed: int = 0,
                            tol: Optional[Tolerance] = None) -> List[int]:
    """Input indices where the grid finds a passing direction but the decider rejected the point.

    The check is one-sided: a decider may accept a point whose direction set is too narrow
    for the grid to hit.
    """
    tol = tol if tol is not None else Tolerance.for_set(S)
    kind = CertificateKind(kind)
    mismatches = []
    for pos, ok in enumerate(accepted):
        found = oracle_direction_grid(S, S.coords[pos], r, kind, samples, tol, seed=seed)
        if found is not None and not ok:
            mismatches.append(S.indices[pos])
        elif found is None and ok:
            logger.debug("point %d: accepted but missed by a %d-direction grid", S.indices[pos], samples)
    return mismatches
