"""
Closed subsets of the unit circle stored as unions of angular intervals.

Intervals live in [0, 2*pi); an arc crossing angle 0 is stored as two pieces, one ending
at the last double below 2*pi and one starting at 0. ``arcs()`` reassembles the logical arcs.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .core import DEFAULT_ANG_EPS


TWO_PI = 2.0 * math.pi

Interval = Tuple[float, float]

_SHIFTS = (-TWO_PI, 0.0, TWO_PI)

# largest stored angle; 2*pi itself is represented by 0
LAST_ANGLE = math.nextafter(TWO_PI, 0.0)


def normalize_angle(theta: float) -> float:
    """Map an angle into [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    return 0.0 if t >= TWO_PI else t


def angular_distance(a: float, b: float) -> float:
    d = abs(normalize_angle(a) - normalize_angle(b))
    return min(d, TWO_PI - d)


def angle_of(v: Iterable[float]) -> float:
    v = np.asarray(v, dtype=float)
    return normalize_angle(math.atan2(v[1], v[0]))


def unit_vector(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta)])


def _split(a: float, b: float) -> List[Interval]:
    start = normalize_angle(a)
    end = start + (b - a)
    if end <= TWO_PI:
        return [(start, end)]
    return [(start, TWO_PI), (0.0, end - TWO_PI)]


@dataclass(frozen=True)
class ArcSet:
    """Union of closed angular intervals, sorted and pairwise disjoint."""
    intervals: Tuple[Interval, ...] = ()
    radius_context: Optional[float] = None
    ang_eps: float = field(default=DEFAULT_ANG_EPS, compare=False)

    @classmethod
    def from_intervals(cls, raw: Iterable[Interval], radius_context: Optional[float] = None,
                       ang_eps: float = DEFAULT_ANG_EPS) -> 'ArcSet':
        """Normalize, split at angle 0, sort and merge intervals touching within ang_eps."""
        pieces: List[Interval] = []
        for a, b in raw:
            if b < a:
                raise ValueError(f"interval end {b} precedes start {a}")
            if b - a >= TWO_PI - ang_eps:
                return cls.full(radius_context, ang_eps)
            pieces.extend(_split(a, b))
        pieces.sort()

        merged: List[List[float]] = []
        for a, b in pieces:
            if merged and a <= merged[-1][1] + ang_eps:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])

        if len(merged) == 1 and merged[0][0] <= ang_eps and merged[0][1] >= TWO_PI - ang_eps:
            return cls.full(radius_context, ang_eps)
        if merged and merged[-1][1] >= TWO_PI:
            # the end 2*pi wraps to 0, merging with a piece that starts there
            merged[-1][1] = LAST_ANGLE
            if merged[0][0] > 0.0:
                merged.insert(0, [0.0, 0.0])
        return cls(tuple((a, b) for a, b in merged), radius_context, ang_eps)

    @classmethod
    def empty(cls, radius_context: Optional[float] = None,
              ang_eps: float = DEFAULT_ANG_EPS) -> 'ArcSet':
        return cls((), radius_context, ang_eps)

    @classmethod
    def full(cls, radius_context: Optional[float] = None,
             ang_eps: float = DEFAULT_ANG_EPS) -> 'ArcSet':
        return cls(((0.0, LAST_ANGLE),), radius_context, ang_eps)

    @classmethod
    def closed_arc(cls, center: float, half_width: float, radius_context: Optional[float] = None,
                   ang_eps: float = DEFAULT_ANG_EPS) -> 'ArcSet':
        """The closed arc [center - half_width, center + half_width]."""
        if half_width < 0:
            return cls.empty(radius_context, ang_eps)
        return cls.from_intervals([(center - half_width, center + half_width)],
                                  radius_context, ang_eps)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_full(self) -> bool:
        return (len(self.intervals) == 1 and self.intervals[0][0] <= self.ang_eps
                and self.intervals[0][1] >= TWO_PI - self.ang_eps)

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def contains(self, theta: float, slack: float = 0.0) -> bool:
        t = normalize_angle(theta)
        return any(a - slack <= t + shift <= b + slack
                   for a, b in self.intervals for shift in _SHIFTS)

    def intersect(self, other: 'ArcSet') -> 'ArcSet':
        eps = max(self.ang_eps, other.ang_eps)
        out: List[Interval] = []
        for a0, a1 in self.intervals:
            for b0, b1 in other.intervals:
                for shift in _SHIFTS:
                    lo, hi = max(a0, b0 + shift), min(a1, b1 + shift)
                    if lo <= hi + eps:
                        if lo > hi:
                            lo = hi = 0.5 * (lo + hi)
                        out.append((lo, hi))
        return ArcSet.from_intervals(out, self.radius_context, eps)

    def remove_open_arc(self, center: float, half_width: float) -> 'ArcSet':
        """Subtract the open arc (center - half_width, center + half_width)."""
        if half_width <= 0:
            return self
        if half_width >= math.pi:
            return self.intersect(ArcSet.closed_arc(center + math.pi, 0.0, ang_eps=self.ang_eps))
        c = normalize_angle(center)
        forbidden = [(c - half_width + s, c + half_width + s) for s in _SHIFTS]

        pieces = [list(iv) for iv in self.intervals]
        for lo, hi in forbidden:
            kept: List[List[float]] = []
            for p, q in pieces:
                if hi <= p or lo >= q:
                    kept.append([p, q])
                    continue
                if p <= lo:
                    kept.append([p, lo])
                if q >= hi:
                    kept.append([hi, q])
            pieces = kept
        return ArcSet.from_intervals([(p, q) for p, q in pieces], self.radius_context, self.ang_eps)

    def issubset(self, other: 'ArcSet', slack: float = 0.0) -> bool:
        for a, b in self.intervals:
            if not any(c - slack <= a + shift and b + shift <= d + slack
                       for c, d in other.intervals for shift in _SHIFTS):
                return False
        return True

    def arcs(self) -> List[Interval]:
        """Logical arcs (start, end) with end possibly beyond 2*pi when crossing angle 0."""
        if self.is_full:
            return [(0.0, TWO_PI)]
        ivs = list(self.intervals)
        if (len(ivs) >= 2 and ivs[0][0] <= self.ang_eps
                and ivs[-1][1] >= TWO_PI - self.ang_eps):
            first = ivs.pop(0)
            last = ivs.pop()
            ivs.append((last[0], first[1] + TWO_PI))
        return ivs

    def sample_angles(self) -> List[float]:
        """Endpoints and midpoint of every logical arc, ascending in [0, 2*pi)."""
        angles: List[float] = []
        for a, b in self.arcs():
            for t in (a, 0.5 * (a + b), b):
                t = normalize_angle(t)
                if not any(angular_distance(t, u) <= self.ang_eps for u in angles):
                    angles.append(t)
        return sorted(angles)

    def endpoint_distance(self, theta: float) -> float:
        """Angular distance from ``theta`` to the nearest logical arc endpoint."""
        if self.is_full:
            return math.inf
        ends = [t for arc in self.arcs() for t in arc]
        if not ends:
            return math.inf
        return min(angular_distance(theta, t) for t in ends)

    def first_direction(self) -> Optional[float]:
        """Midpoint of the first logical arc, the deterministic representative."""
        arcs = self.arcs()
        if not arcs:
            return None
        a, b = arcs[0]
        return normalize_angle(0.5 * (a + b))

    def as_degrees(self) -> List[Interval]:
        return [(math.degrees(a), math.degrees(b)) for a, b in self.arcs()]
