"""Invariance conditions for ellipsoids and general quadratic sets.

Discrete ellipsoids are decided in closed form: with W the symmetric
square root of Q^{-1}, A^T Q A - mu Q is negative semidefinite exactly when
mu >= lambda_1(W A^T Q A W), so the smallest admissible mu is that
eigenvalue. The Schur-complement and mu-free forms are kept as separate
checkers for cross-validation.
"""

from __future__ import annotations

import logging
import time
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from invkit.conditions.models import (
    CheckReport,
    EscapeWitness,
    Refutation,
    ScalarKind,
    ScalarLMICertificate,
)
from invkit.conditions.search import ternary_minimize
from invkit.conditions.verify import (
    certified_report,
    continuous_lmi,
    discrete_lmi,
    inconclusive_report,
    refuted_report,
    system_matrix,
)
from invkit.conditions.witness import find_continuous_exit, sample_discrete_escape
from invkit.config import DEFAULT_WITNESS_BUDGET, Tolerances
from invkit.numerics import (
    Definiteness,
    FloatArray,
    SymEig,
    classify_margin,
    definiteness,
    invert,
    lambda_max,
    scale_of,
    sym_eig,
    sym_function,
    symmetrize,
)
from invkit.problem import TimeRegime
from invkit.sets import Ellipsoid, QuadraticSet, membership

logger = logging.getLogger(__name__)


def inverse_sqrt(q: FloatArray, eig_tol: float) -> FloatArray:
    """Return W with W^2 = Q^{-1} for positive definite Q."""
    return sym_function(q, lambda values: 1.0 / np.sqrt(values), eig_tol)


def closed_form_mu(a: FloatArray, q: FloatArray, eig_tol: float) -> tuple[SymEig, FloatArray]:
    """Return the eigen-decomposition of W A^T Q A W and W itself.

    The top eigenvalue is mu_min, the smallest mu with A^T Q A - mu Q <= 0.
    """
    w = inverse_sqrt(q, eig_tol)
    scaled = symmetrize(w @ (a.T @ q @ a) @ w)
    return sym_eig(scaled, eig_tol), w


def _ellipsoid_witness(
    a: FloatArray, e: Ellipsoid, x: FloatArray, tolerances: Tolerances
) -> EscapeWitness:
    image = a @ x
    slack = membership(e, image, tolerances=tolerances).slack
    return EscapeWitness(point=x, image=image, slack=slack, step=1)


def _mu_certificate(
    a: FloatArray, q: FloatArray, mu: float, eig_tol: float
) -> ScalarLMICertificate:
    return ScalarLMICertificate(
        scalar=ScalarKind.MU,
        value=mu,
        lmi_lambda_max=lambda_max(discrete_lmi(a, q, mu), eig_tol),
    )


def check_discrete_ellipsoid(
    a: ArrayLike,
    e: Ellipsoid,
    tolerances: Tolerances | None = None,
) -> CheckReport:
    """Decide invariance of ``{x | x^T Q x <= 1}`` under x_{k+1} = A x_k.

    Invariant iff mu_min = lambda_1(W A^T Q A W) <= 1 within the band; the
    certificate carries mu = clip(mu_min, 0, 1). Otherwise the witness
    x = W v, v the top unit eigenvector, lies on the boundary and has
    (Ax)^T Q (Ax) = mu_min.

    Example:
        ```python
        report = check_discrete_ellipsoid(0.5 * np.eye(2), Ellipsoid(np.eye(2)))
        report.diagnostics["mu_min"]  # 0.25
        ```
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, e)
    checker = "check_discrete_ellipsoid"
    eig, w = closed_form_mu(matrix, e.q, tolerances.eig_tol)
    mu_min = eig.lambda_max
    mu = min(max(mu_min, 0.0), 1.0)
    # Decided on A^T Q A - mu Q with its own scale, exactly as the certificate is re-verified.
    lmi = discrete_lmi(matrix, e.q, mu)
    band = tolerances.psd_tol * scale_of(lmi)
    top = lambda_max(lmi, tolerances.eig_tol)
    cross = definiteness(
        discrete_lmi(matrix, e.q, 1.0), tolerances.psd_tol, eig_tol=tolerances.eig_tol
    )
    diagnostics: dict[str, Any] = {
        "mu_min": mu_min,
        "lmi_lambda_max": top,
        "band": band,
        "lyapunov_cross_check": str(cross),
    }

    if top <= band:
        if cross is Definiteness.NOT_NEG_SEMIDEFINITE:
            logger.warning(
                "%s: closed form accepts mu_min = %.6g, A^T Q A - Q disagrees", checker, mu_min
            )
        certificate = ScalarLMICertificate(scalar=ScalarKind.MU, value=mu, lmi_lambda_max=top)
        return certified_report(
            matrix, e, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )
    if mu_min <= 1.0 + band:
        return inconclusive_report(
            "mu_min lies within the band of 1 but A^T Q A - mu Q is not semidefinite",
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    witness = _ellipsoid_witness(matrix, e, w @ eig.vector(0), tolerances)
    refutation = Refutation(
        failed_conditions=("mu_min > 1",),
        witness=witness,
        trace={"mu_min": mu_min},
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )


def check_discrete_ellipsoid_schur(
    a: ArrayLike,
    e: Ellipsoid,
    tolerances: Tolerances | None = None,
) -> CheckReport:
    """Schur-complement form: [[Q^{-1}, A], [A^T, nu Q]] >= 0 for some nu in [0, 1].

    The block matrix is tested at nu = min(1, max(mu_min, 0)), the best
    choice, so the verdict matches :func:`check_discrete_ellipsoid`.
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, e)
    checker = "check_discrete_ellipsoid_schur"
    eig, w = closed_form_mu(matrix, e.q, tolerances.eig_tol)
    nu = min(1.0, max(eig.lambda_max, 0.0))
    block = symmetrize(
        np.block([[invert(e.q, tolerances.singular_tol), matrix], [matrix.T, nu * e.q]])
    )
    smallest = sym_eig(block, tolerances.eig_tol).lambda_min
    band = tolerances.psd_tol * scale_of(block)
    diagnostics: dict[str, Any] = {"nu": nu, "block_lambda_min": smallest, "band": band}

    if smallest >= -band:
        certificate = _mu_certificate(matrix, e.q, nu, tolerances.eig_tol)
        return certified_report(
            matrix, e, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    witness = _ellipsoid_witness(matrix, e, w @ eig.vector(0), tolerances)
    refutation = Refutation(
        failed_conditions=("block matrix is not positive semidefinite for any nu in [0, 1]",),
        witness=witness,
        trace={"nu": nu, "block_lambda_min": smallest},
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )


def check_discrete_ellipsoid_lyapunov(
    a: ArrayLike,
    e: Ellipsoid,
    tolerances: Tolerances | None = None,
) -> CheckReport:
    """mu-free form: A^T Q A - Q <= 0."""
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, e)
    checker = "check_discrete_ellipsoid_lyapunov"
    lmi = discrete_lmi(matrix, e.q, 1.0)
    eig = sym_eig(lmi, tolerances.eig_tol)
    band = tolerances.psd_tol * scale_of(lmi)
    diagnostics: dict[str, Any] = {"lambda_max": eig.lambda_max, "band": band}

    if eig.lambda_max <= band:
        certificate = ScalarLMICertificate(
            scalar=ScalarKind.MU, value=1.0, lmi_lambda_max=eig.lambda_max
        )
        return certified_report(
            matrix, e, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    v = eig.vector(0)
    x = v / np.sqrt(float(v @ e.q @ v))
    refutation = Refutation(
        failed_conditions=("A^T Q A - Q has a positive eigenvalue",),
        witness=_ellipsoid_witness(matrix, e, x, tolerances),
        trace={"lambda_max": eig.lambda_max},
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )


def check_discrete_quadratic(
    a: ArrayLike,
    s: QuadraticSet,
    tolerances: Tolerances | None = None,
    *,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
) -> CheckReport:
    """Decide invariance of ``{x | x^T Q x <= 1}`` for any symmetric Q.

    Minimizes the convex function mu -> lambda_1(A^T Q A - mu Q) on [0, 1];
    Invariant iff the minimum is within the band. A NotInvariant verdict
    carries the LMI trace and, when sampling finds one, an escape witness.
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, s)
    checker = "check_discrete_quadratic"

    def objective(mu: float) -> float:
        return lambda_max(discrete_lmi(matrix, s.q, mu), tolerances.eig_tol)

    best = ternary_minimize(objective, 0.0, 1.0, tolerances.mu_search_tol)
    band = tolerances.psd_tol * scale_of(discrete_lmi(matrix, s.q, best.argmin))
    diagnostics: dict[str, Any] = {
        "mu_star": best.argmin,
        "min_lambda_max": best.value,
        "band": band,
        "search_iterations": best.iterations,
    }
    if best.value <= band:
        certificate = ScalarLMICertificate(
            scalar=ScalarKind.MU, value=best.argmin, lmi_lambda_max=best.value
        )
        return certified_report(
            matrix, s, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    witness = sample_discrete_escape(matrix, s, tolerances, budget=witness_budget, seed=seed)
    refutation = Refutation(
        failed_conditions=("no mu in [0, 1] makes A^T Q A - mu Q negative semidefinite",),
        witness=witness,
        trace={"mu_star": best.argmin, "min_lambda_max": best.value},
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )


def check_continuous_ellipsoid(
    a: ArrayLike,
    e: Ellipsoid,
    tolerances: Tolerances | None = None,
) -> CheckReport:
    """Decide invariance of an ellipsoid under x' = A x: A^T Q + Q A <= 0.

    The verdict follows the tri-state definiteness of A^T Q + Q A; a
    Marginal top eigenvalue yields Inconclusive. Invariant reports carry
    ScalarLMI(eta, 0). A NotInvariant witness starts at x = v / sqrt(v^T Q v)
    for the top eigenvector v, where (Ax)^T Q x > 0.

    Example:
        ```python
        rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
        strict = Tolerances(psd_tol=0.0)
        check_continuous_ellipsoid(rotation, Ellipsoid(np.eye(2)), strict).verdict  # Invariant
        ```
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, e)
    checker = "check_continuous_ellipsoid"
    lyapunov = continuous_lmi(matrix, e.q, 0.0)
    eig = sym_eig(lyapunov, tolerances.eig_tol)
    band = tolerances.psd_tol * scale_of(lyapunov)
    state = classify_margin(eig.lambda_max, band)
    diagnostics: dict[str, Any] = {
        "lambda_max": eig.lambda_max,
        "band": band,
        "definiteness": str(state),
    }

    match state:
        case Definiteness.NEG_SEMIDEFINITE:
            certificate = ScalarLMICertificate(
                scalar=ScalarKind.ETA, value=0.0, lmi_lambda_max=eig.lambda_max
            )
            return certified_report(
                matrix, e, TimeRegime.CONTINUOUS, certificate,
                checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
            )
        case Definiteness.MARGINAL:
            return inconclusive_report(
                "lambda_1(A^T Q + Q A) lies inside the tolerance band",
                checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
            )

    v = eig.vector(0)
    x = v / np.sqrt(float(v @ e.q @ v))
    rate = float((matrix @ x) @ e.q @ x)
    refutation = Refutation(
        failed_conditions=("(Ax)^T Q x > 0 on the boundary",),
        witness=find_continuous_exit(matrix, e, x, tolerances),
        trace={"lambda_max": eig.lambda_max, "boundary_point": x.tolist(), "outward_rate": rate},
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )
