"""Exact algebraic automorphisms of the 2-sphere realizing point correspondences.

Coordinates live in a tower of real quadratic extensions of the rationals, so
every certificate is checked by exact equality.
"""

from .classify import IsomorphismDecision, SurfaceDescriptor, are_isomorphic
from .engine import (
    AutomorphismPlan,
    CertificateRow,
    DegenerateRotationError,
    GeometricInfeasibilityError,
    TransitivityInstance,
    choose_axes,
    intersect_parallels,
    rotation_between,
    solve,
)
from .forest import (
    ForestNode,
    InfinitelyNearForest,
    NothingToReduceError,
    random_forest,
    reduce_fully,
    reduction_step,
)
from .interpolation import (
    CircleValuedMap,
    Rotation2,
    circle_stereo,
    circle_unstereo,
    interpolate_rotations,
    lagrange_polynomial,
    rational_enumeration,
)
from .poly import OutsideDomainError, Polynomial, RationalMap, map_eval, poly_compose
from .sphere import (
    NORTH,
    SOUTH,
    AxisFrame,
    Boost,
    NotOnSphereError,
    Rotation,
    SpherePoint,
    boost,
    normalize_to_cap,
    sphere_point_from_plane,
)
from .tower import (
    DomainError,
    RadicandRefinementError,
    TowerScalar,
    canonical_sqrt,
    squarefree_decompose,
    tower_mul,
    tower_sign,
)
from .twist import TwistMap, make_twist, twist_inverse

__version__ = "0.1.0"

__all__ = [
    "IsomorphismDecision",
    "SurfaceDescriptor",
    "are_isomorphic",
    "AutomorphismPlan",
    "CertificateRow",
    "DegenerateRotationError",
    "GeometricInfeasibilityError",
    "TransitivityInstance",
    "choose_axes",
    "intersect_parallels",
    "rotation_between",
    "solve",
    "ForestNode",
    "InfinitelyNearForest",
    "NothingToReduceError",
    "random_forest",
    "reduce_fully",
    "reduction_step",
    "CircleValuedMap",
    "Rotation2",
    "circle_stereo",
    "circle_unstereo",
    "interpolate_rotations",
    "lagrange_polynomial",
    "rational_enumeration",
    "OutsideDomainError",
    "Polynomial",
    "RationalMap",
    "map_eval",
    "poly_compose",
    "NORTH",
    "SOUTH",
    "AxisFrame",
    "Boost",
    "NotOnSphereError",
    "Rotation",
    "SpherePoint",
    "boost",
    "normalize_to_cap",
    "sphere_point_from_plane",
    "DomainError",
    "RadicandRefinementError",
    "TowerScalar",
    "canonical_sqrt",
    "squarefree_decompose",
    "tower_mul",
    "tower_sign",
    "TwistMap",
    "make_twist",
    "twist_inverse",
]
