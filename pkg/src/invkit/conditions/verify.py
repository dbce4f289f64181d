"""Algebraic re-verification of certificates.

Every check here substitutes the certificate into the defining equalities
and inequalities directly; nothing is re-solved. Residual bands follow the
tolerance rule tol * (1 + ||M||_F) of the matrix that produced the residual.
"""

from __future__ import annotations

import logging
import time as time_module
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from invkit.conditions.models import (
    Certificate,
    CertificateCheck,
    CheckReport,
    MatrixRole,
    NonnegMatrixCertificate,
    ODNonnegMatrixCertificate,
    Refutation,
    ScalarKind,
    ScalarLMICertificate,
    SufficientOnlyCertificate,
    VRepMatrixCertificate,
    Verdict,
)
from invkit.config import Tolerances
from invkit.numerics import (
    FloatArray,
    NumericsError,
    as_matrix,
    invert,
    lambda_max,
    max_abs,
    scale_of,
    symmetrize,
)
from invkit.problem import TimeRegime
from invkit.sets import (
    DimensionMismatchError,
    DoubleCone,
    Ellipsoid,
    HPolyhedron,
    LorenzCone,
    QuadraticSet,
    SetDescription,
    VPolyhedron,
)

logger = logging.getLogger(__name__)


def discrete_lmi(a: FloatArray, q: FloatArray, mu: float) -> FloatArray:
    """Return A^T Q A - mu Q."""
    return symmetrize(a.T @ q @ a - mu * q)


def continuous_lmi(a: FloatArray, q: FloatArray, eta: float) -> FloatArray:
    """Return A^T Q + Q A - eta Q."""
    return symmetrize(a.T @ q + q @ a - eta * q)


def lorenz_scalars(
    a: FloatArray, cone: LorenzCone | DoubleCone
) -> tuple[float, float, float, float]:
    """Return u_n^T A u_n and u_n^T A Q^{-1} A^T u_n, each followed by its scale 1 + ||M||_F."""
    u_n = cone.require_standard().u_n
    aq = a @ invert(cone.q) @ a.T
    return (
        float(u_n @ a @ u_n),
        scale_of(a),
        float(u_n @ aq @ u_n),
        scale_of(aq),
    )


def _failed(reason: str, **residuals: float) -> CertificateCheck:
    logger.debug("Certificate rejected: %s", reason)
    return CertificateCheck(valid=False, residuals=residuals, reason=reason)


def _verify_h_rows(
    a: FloatArray,
    p: HPolyhedron,
    h: FloatArray,
    tol: float,
    *,
    continuous: bool,
) -> CertificateCheck:
    m = p.num_facets
    if h.shape != (m, m):
        return _failed(f"certificate must be {m}x{m}, got {h.shape}")
    ga = p.g @ a
    band = tol * scale_of(ga)
    if continuous:
        off = h[~np.eye(m, dtype=bool)]
        sign_residual = float(-np.min(off, initial=0.0))
        bound = h @ p.b
    else:
        sign_residual = float(-np.min(h, initial=0.0))
        bound = h @ p.b - p.b
    equality = max_abs(h @ p.g - ga)
    bound_residual = float(np.max(bound, initial=0.0))
    residuals = {"sign": sign_residual, "equality": equality, "bound": bound_residual}
    if sign_residual > band:
        return _failed("negative entries where nonnegativity is required", **residuals)
    if equality > band:
        return _failed("HG differs from GA", **residuals)
    if bound_residual > tol * scale_of(p.b.reshape(1, -1)):
        return _failed("right-hand-side inequality violated", **residuals)
    return CertificateCheck(valid=True, residuals=residuals)


def _verify_v_columns(
    a: FloatArray,
    p: VPolyhedron,
    l: FloatArray,  # noqa: E741
    tol: float,
    *,
    continuous: bool,
) -> CertificateCheck:
    k = p.num_vertices + p.num_rays
    if l.shape != (k, k):
        return _failed(f"certificate must be {k}x{k}, got {l.shape}")
    x = p.generators
    ax = a @ x
    band = tol * scale_of(ax)
    if continuous:
        off = l[~np.eye(k, dtype=bool)]
        sign_residual = float(-np.min(off, initial=0.0))
        target = np.zeros(k)
    else:
        sign_residual = float(-np.min(l, initial=0.0))
        target = np.concatenate([np.ones(p.num_vertices), np.zeros(p.num_rays)])
    equality = max_abs(x @ l - ax)
    weights = l[: p.num_vertices].sum(axis=0) if p.num_vertices else np.zeros(k)
    weight_residual = float(np.max(np.abs(weights - target))) if p.num_vertices else 0.0
    residuals = {"sign": sign_residual, "equality": equality, "weights": weight_residual}
    if sign_residual > band:
        return _failed("negative entries where nonnegativity is required", **residuals)
    if equality > band:
        return _failed("XL differs from AX", **residuals)
    if weight_residual > tol * (1.0 + k):
        return _failed("vertex-weight sums are wrong", **residuals)
    return CertificateCheck(valid=True, residuals=residuals)


def _verify_scalar_lmi(
    a: FloatArray,
    region: SetDescription,
    time: TimeRegime,
    cert: ScalarLMICertificate,
    tolerances: Tolerances,
) -> CertificateCheck:
    if not isinstance(region, Ellipsoid | QuadraticSet | LorenzCone | DoubleCone):
        return _failed(f"scalar certificate does not apply to {region.kind}")
    expected = ScalarKind.ETA if time is TimeRegime.CONTINUOUS else ScalarKind.MU
    if cert.scalar is not expected:
        return _failed(f"{time} problems need a {expected} certificate, got {cert.scalar}")

    value = cert.value
    if expected is ScalarKind.MU:
        lmi = discrete_lmi(a, region.q, value)
    else:
        lmi = continuous_lmi(a, region.q, value)
    band = tolerances.psd_tol * scale_of(lmi)
    top = lambda_max(lmi, tolerances.eig_tol)
    residuals: dict[str, float] = {"lmi_lambda_max": top, "value": value}
    if top > band:
        return _failed("LMI matrix is not negative semidefinite", **residuals)

    match region:
        case Ellipsoid() | QuadraticSet() if expected is ScalarKind.MU:
            if not -band <= value <= 1.0 + band:
                return _failed("mu must lie in [0, 1]", **residuals)
        case Ellipsoid():
            if value > band:
                return _failed("eta must be nonpositive for an ellipsoid", **residuals)
        case LorenzCone() | DoubleCone() if expected is ScalarKind.MU:
            if value < -band:
                return _failed("mu must be nonnegative", **residuals)
            if isinstance(region, LorenzCone):
                return _verify_orientation(a, region, tolerances.psd_tol, residuals)
        case QuadraticSet():
            return _failed("continuous quadratic sets have no scalar certificate")
    return CertificateCheck(valid=True, residuals=residuals)


def _verify_orientation(
    a: FloatArray,
    cone: LorenzCone,
    psd_tol: float,
    residuals: dict[str, float],
) -> CertificateCheck:
    axis_gain, axis_scale, dual_gain, dual_scale = lorenz_scalars(a, cone)
    residuals = {**residuals, "axis_gain": axis_gain, "dual_gain": dual_gain}
    if axis_gain < -psd_tol * axis_scale:
        return _failed("u_n^T A u_n is negative", **residuals)
    if dual_gain > psd_tol * dual_scale:
        return _failed("u_n^T A Q^-1 A^T u_n is positive", **residuals)
    return CertificateCheck(valid=True, residuals=residuals)


def verify_certificate(
    a: ArrayLike,
    region: SetDescription,
    time: TimeRegime,
    certificate: Certificate,
    tolerances: Tolerances | None = None,
) -> CertificateCheck:
    """Re-verify a certificate by direct substitution.

    Args:
        a: System matrix.
        region: The set the certificate claims invariant.
        time: Time regime of the claim.
        certificate: Certificate to check.
        tolerances: Residual thresholds (lp_tol for matrices, psd_tol for LMIs).

    Returns:
        Validity with the residuals that decided it.

    Example:
        ```python
        diamond = HPolyhedron(g=[[1, 1], [-1, 1], [1, -1], [-1, -1]], b=[1, 1, 1, 1])
        cert = ODNonnegMatrixCertificate(-np.eye(4), MatrixRole.H)
        verify_certificate(-np.eye(2), diamond, TimeRegime.CONTINUOUS, cert).valid  # True
        ```
    """
    tolerances = tolerances or Tolerances()
    matrix = as_matrix(a, square=True, name="A")
    continuous = time is TimeRegime.CONTINUOUS

    match certificate:
        case NonnegMatrixCertificate(h=h):
            if continuous or not isinstance(region, HPolyhedron):
                return _failed("nonnegative H certifies discrete H-polyhedra only")
            return _verify_h_rows(matrix, region, h, tolerances.lp_tol, continuous=False)
        case ODNonnegMatrixCertificate(matrix=od, role=role):
            if not continuous:
                return _failed("off-diagonal nonnegative matrices certify continuous time only")
            if role is MatrixRole.H and isinstance(region, HPolyhedron):
                return _verify_h_rows(matrix, region, od, tolerances.lp_tol, continuous=True)
            if role is MatrixRole.L and isinstance(region, VPolyhedron):
                return _verify_v_columns(matrix, region, od, tolerances.lp_tol, continuous=True)
            return _failed(f"role {role} does not match {region.kind}")
        case VRepMatrixCertificate(l=l):
            if continuous or not isinstance(region, VPolyhedron):
                return _failed("L certifies discrete V-polyhedra only")
            return _verify_v_columns(matrix, region, l, tolerances.lp_tol, continuous=False)
        case ScalarLMICertificate():
            return _verify_scalar_lmi(matrix, region, time, certificate, tolerances)
        case SufficientOnlyCertificate():
            if continuous or not isinstance(region, LorenzCone):
                return _failed("the sufficient-only certificate applies to discrete Lorenz cones")
            product = symmetrize(matrix.T @ region.q @ matrix)
            top = lambda_max(product, tolerances.eig_tol)
            residuals = {"lambda_max": top}
            if top > tolerances.psd_tol * scale_of(product):
                return _failed("A^T Q A is not negative semidefinite", **residuals)
            return _verify_orientation(matrix, region, tolerances.psd_tol, residuals)
    return _failed(f"unknown certificate {type(certificate).__name__}")


def certified_report(
    a: FloatArray,
    region: SetDescription,
    time: TimeRegime,
    certificate: Certificate,
    *,
    checker: str,
    tolerances: Tolerances,
    diagnostics: dict[str, Any],
    started: float,
) -> CheckReport:
    """Build the report of a successful search, downgraded when its certificate fails.

    Invariant is only returned when the certificate re-verifies; otherwise
    the solver path and the substitution disagree and the verdict is
    Inconclusive.
    """
    check = verify_certificate(a, region, time, certificate, tolerances)
    diagnostics["certificate_check"] = check.to_dict()
    verdict = Verdict.INVARIANT
    if not check.valid:
        logger.warning("%s: certificate failed re-verification: %s", checker, check.reason)
        verdict = Verdict.INCONCLUSIVE
    logger.info("%s: %s", checker, verdict)
    return CheckReport(
        verdict=verdict,
        checker=checker,
        tolerances=tolerances,
        certificate=certificate,
        diagnostics=diagnostics,
        elapsed_seconds=time_module.monotonic() - started,
    )


def refuted_report(
    refutation: Refutation,
    *,
    checker: str,
    tolerances: Tolerances,
    diagnostics: dict[str, Any],
    started: float,
    verdict: Verdict = Verdict.NOT_INVARIANT,
) -> CheckReport:
    """Build a NotInvariant (or Inconclusive) report around a refutation."""
    logger.info("%s: %s (%s)", checker, verdict, ", ".join(refutation.failed_conditions))
    return CheckReport(
        verdict=verdict,
        checker=checker,
        tolerances=tolerances,
        refutation=refutation,
        diagnostics=diagnostics,
        elapsed_seconds=time_module.monotonic() - started,
    )


def inconclusive_report(
    reason: str,
    *,
    checker: str,
    tolerances: Tolerances,
    diagnostics: dict[str, Any],
    started: float,
) -> CheckReport:
    """Build the report of a deciding quantity that fell inside its tolerance band."""
    logger.info("%s: %s (%s)", checker, Verdict.INCONCLUSIVE, reason)
    diagnostics["inconclusive_reason"] = reason
    return CheckReport(
        verdict=Verdict.INCONCLUSIVE,
        checker=checker,
        tolerances=tolerances,
        diagnostics=diagnostics,
        elapsed_seconds=time_module.monotonic() - started,
    )


def system_matrix(a: ArrayLike, region: SetDescription) -> FloatArray:
    """Return A as a float matrix after checking it against the set dimension.

    Raises:
        DimensionMismatchError: If A is not square or disagrees with the set.
    """
    try:
        matrix = as_matrix(a, square=True, name="A")
    except NumericsError as e:
        raise DimensionMismatchError(str(e)) from e
    if matrix.shape[0] != region.dim:
        raise DimensionMismatchError(
            f"A is {matrix.shape[0]}x{matrix.shape[0]} but the set has dimension {region.dim}"
        )
    return matrix
