"""Invariance conditions - checkers, certificates and diagnostics."""

from invkit.conditions.cone import (
    MuMode,
    check_continuous_double_cone,
    check_continuous_lorenz,
    check_discrete_double_cone,
    check_discrete_lorenz,
    check_discrete_lorenz_sufficient,
    eta_interval,
    mu_interval,
)
from invkit.conditions.diagnostics import (
    BoundaryFlowResult,
    DualHalfspaceCheck,
    HalfspaceOrientation,
    MuCase,
    MuGeometry,
    check_boundary_flow,
    check_dual_halfspace,
    classify_mu_geometry,
)
from invkit.conditions.dispatch import UnsupportedProblemError, check_problem
from invkit.conditions.ellipsoid import (
    check_continuous_ellipsoid,
    check_discrete_ellipsoid,
    check_discrete_ellipsoid_lyapunov,
    check_discrete_ellipsoid_schur,
    check_discrete_quadratic,
    closed_form_mu,
)
from invkit.conditions.models import (
    Certificate,
    CertificateCheck,
    CertificateKind,
    CheckReport,
    EscapeWitness,
    MatrixRole,
    NonnegMatrixCertificate,
    ODNonnegMatrixCertificate,
    Refutation,
    ScalarInterval,
    ScalarKind,
    ScalarLMICertificate,
    SufficientOnlyCertificate,
    Verdict,
    VRepMatrixCertificate,
    certificate_from_dict,
)
from invkit.conditions.polyhedral import (
    check_continuous_polyhedron,
    check_continuous_v_polyhedron,
    check_discrete_polyhedron,
    check_discrete_v_polyhedron,
)
from invkit.conditions.search import SearchResult, largest_feasible, ternary_minimize
from invkit.conditions.verify import verify_certificate
from invkit.conditions.witness import find_continuous_exit

__all__ = [
    "BoundaryFlowResult",
    "Certificate",
    "CertificateCheck",
    "CertificateKind",
    "CheckReport",
    "DualHalfspaceCheck",
    "EscapeWitness",
    "HalfspaceOrientation",
    "MatrixRole",
    "MuCase",
    "MuGeometry",
    "MuMode",
    "NonnegMatrixCertificate",
    "ODNonnegMatrixCertificate",
    "Refutation",
    "ScalarInterval",
    "ScalarKind",
    "ScalarLMICertificate",
    "SearchResult",
    "SufficientOnlyCertificate",
    "UnsupportedProblemError",
    "VRepMatrixCertificate",
    "Verdict",
    "certificate_from_dict",
    "check_boundary_flow",
    "check_continuous_double_cone",
    "check_continuous_ellipsoid",
    "check_continuous_lorenz",
    "check_continuous_polyhedron",
    "check_continuous_v_polyhedron",
    "check_discrete_double_cone",
    "check_discrete_ellipsoid",
    "check_discrete_ellipsoid_lyapunov",
    "check_discrete_ellipsoid_schur",
    "check_discrete_lorenz",
    "check_discrete_lorenz_sufficient",
    "check_discrete_polyhedron",
    "check_discrete_quadratic",
    "check_discrete_v_polyhedron",
    "check_dual_halfspace",
    "check_problem",
    "classify_mu_geometry",
    "closed_form_mu",
    "eta_interval",
    "find_continuous_exit",
    "largest_feasible",
    "mu_interval",
    "ternary_minimize",
    "verify_certificate",
]
