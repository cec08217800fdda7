"""Set-level property deciders, theorem certificates and brute-force oracles."""

from .deciders import (
    check_exterior_infty,
    check_exterior_sphere,
    check_spherically_supported,
    monotone_in_radius,
    supported_radii,
    threshold_scan,
)
from .oracles import (
    OracleAgreement,
    cross_validate,
    direction_grid,
    grid_verdict_mismatches,
    oracle_direction_grid,
)
from .reports import (
    PointWitness,
    Prop31Pair,
    Prop31Report,
    PropertyKind,
    PropertyReport,
    Verdict,
)
from .theorems import (
    certify_thm31,
    certify_thm32,
    check_prop31,
    check_thm33_shape,
    default_big_radii,
)
