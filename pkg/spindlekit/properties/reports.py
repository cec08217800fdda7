"""Report types produced by the property deciders and theorem checks."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..geometry.normals import NormalCertificate


class Verdict(str, Enum):
    HOLDS = 'holds'
    FAILS = 'fails'
    DEGENERATE = 'degenerate'


class PropertyKind(str, Enum):
    SPHERICAL_SUPPORT = 'spherical-support'
    EXTERIOR_SPHERE = 'exterior-sphere'
    EXTERIOR_INFTY = 'exterior-infty'
    STRONG_CONVEXITY_SHAPE = 'strong-convexity-shape'


@dataclass(frozen=True, eq=False)
class PointWitness:
    """Certificate (accepted or not) or failure reason for one point, by input index."""
    index: int
    certificate: Optional[NormalCertificate] = None
    reason: Optional[str] = None

    @property
    def accepted(self) -> bool:
        return self.certificate is not None and self.certificate.accepted

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'index': self.index, 'accepted': self.accepted}
        if self.certificate is not None:
            out['certificate'] = self.certificate.to_dict()
        if self.reason:
            out['reason'] = self.reason
        return out


@dataclass(frozen=True, eq=False)
class PropertyReport:
    property: PropertyKind
    radius: Optional[float]
    verdict: Verdict
    witnesses: Tuple[PointWitness, ...]
    worst_margin: float
    timing_ms: float = 0.0
    exact: bool = True
    seed: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def failing(self) -> List[int]:
        return [w.index for w in self.witnesses if not w.accepted]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            'property': self.property.value,
            'radius': self.radius,
            'verdict': self.verdict.value,
            'exact': self.exact,
            'worst_margin': self.worst_margin,
            'failing': self.failing,
            'witnesses': [w.to_dict() for w in self.witnesses],
        }
        if self.seed is not None:
            out['seed'] = self.seed
        if self.details:
            out['details'] = dict(self.details)
        return out


def worst_margin_of(witnesses: Tuple[PointWitness, ...]) -> float:
    margins = [w.certificate.margin for w in witnesses if w.certificate is not None]
    return min(margins) if margins else math.inf


@dataclass(frozen=True)
class Prop31Pair:
    """Residuals of items (ii), (iii), (iv) for one (s, x, zeta_x) triple at radius R."""
    big_radius: float
    s_index: int
    x_index: int
    zeta_x_angle: float
    ii: float
    iii: float
    iv: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'R': self.big_radius, 's': self.s_index, 'x': self.x_index,
            'zeta_x_angle': self.zeta_x_angle, 'ii': self.ii, 'iii': self.iii, 'iv': self.iv,
        }


@dataclass(frozen=True, eq=False)
class Prop31Report:
    radius: float
    tested_R: Tuple[float, ...]
    pairs: Tuple[Prop31Pair, ...]
    max_residual: Dict[str, float]
    skipped: Tuple[Tuple[float, int], ...]
    band: float
    bounded: bool = True
    timing_ms: float = 0.0

    @property
    def max_violation(self) -> Dict[str, float]:
        return {item: max(0.0, value) for item, value in self.max_residual.items()}

    @property
    def holds(self) -> bool:
        """Items (ii) and (iii), the proved implications, within the tolerance band."""
        return self.max_residual['ii'] <= self.band and self.max_residual['iii'] <= self.band

    @property
    def item_iv_finding(self) -> bool:
        return self.max_residual['iv'] > self.band

    def to_dict(self, include_pairs: bool = True) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            'radius': self.radius,
            'tested_R': list(self.tested_R),
            'bounded': self.bounded,
            'holds': self.holds,
            'max_residual': dict(self.max_residual),
            'max_violation': self.max_violation,
            'item_iv_finding': self.item_iv_finding,
            'pair_count': len(self.pairs),
            'skipped': [{'R': R, 'x': idx} for R, idx in self.skipped],
        }
        if include_pairs:
            out['pairs'] = [p.to_dict() for p in self.pairs]
        return out
