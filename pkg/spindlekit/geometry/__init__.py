"""Point-set geometry, realized / far-realized normals and arc-bounded regions."""

from .arcset import ArcSet, angle_of, normalize_angle, unit_vector
from .core import (
    Ball,
    PointSet,
    Tolerance,
    diameter,
    distance_to_set,
    farthest_distance,
    farthest_normals,
    farthest_points,
    projections,
    proximal_normals,
)
from .normals import (
    CertificateKind,
    Direction,
    NormalCertificate,
    exterior_sphere_directions_2d,
    far_certificate_from_point,
    far_supported_directions_2d,
    is_far_realized,
    is_realized,
    is_supporting,
    min_norm_far_certificate,
    supporting_direction_lp,
    supporting_directions_2d,
)
from .regions import (
    ArcRegion,
    CertificateBundle,
    Containment,
    PointResidual,
    ball_hull_membership,
    ball_intersection_2d,
    certificate_region,
    region_contains,
    region_farthest_distance,
    support_gap,
)
