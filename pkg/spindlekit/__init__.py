"""
spindlekit: realized and far-realized normals of finite point sets, spherical support,
exterior sphere conditions and r-strongly convex (spindle convex) hulls.
"""

__version__ = '0.3.0'

from .config import Settings, load_settings
from .errors import (
    ConsistencyError,
    DimensionMismatchError,
    EmptyRegionError,
    InputError,
    NoEnclosingBallError,
    NotInSetError,
    PreconditionError,
    SolverError,
    SpindleError,
    UsageError,
)
from .geometry import PointSet, Tolerance
