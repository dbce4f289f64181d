"""Candidate sets - descriptions, membership, sampling and tangent cones."""

from invkit.sets.geometry import (
    is_full_dimensional,
    membership,
    tangent_cone_contains,
    tangent_cone_margin,
    validate,
)
from invkit.sets.lorenz import lorenz_standardize, standard_cone_matrix, standardize_dynamics
from invkit.sets.models import (
    DegenerateSetError,
    DimensionMismatchError,
    DoubleCone,
    Ellipsoid,
    HPolyhedron,
    LorenzCone,
    LorenzStandardForm,
    Membership,
    MembershipClass,
    NotOnBoundaryError,
    QuadraticSet,
    SetDescription,
    SetError,
    SetKind,
    ValidationReport,
    VPolyhedron,
    WrongInertiaError,
)
from invkit.sets.sampling import axis_point, sample_boundary, sample_members

__all__ = [
    "DegenerateSetError",
    "DimensionMismatchError",
    "DoubleCone",
    "Ellipsoid",
    "HPolyhedron",
    "LorenzCone",
    "LorenzStandardForm",
    "Membership",
    "MembershipClass",
    "NotOnBoundaryError",
    "QuadraticSet",
    "SetDescription",
    "SetError",
    "SetKind",
    "ValidationReport",
    "VPolyhedron",
    "WrongInertiaError",
    "axis_point",
    "is_full_dimensional",
    "lorenz_standardize",
    "membership",
    "sample_boundary",
    "sample_members",
    "standard_cone_matrix",
    "standardize_dynamics",
    "tangent_cone_contains",
    "tangent_cone_margin",
    "validate",
]
