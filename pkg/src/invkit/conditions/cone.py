"""Invariance conditions for Lorenz cones and double cones.

Both regimes reduce to one scalar LMI: ``A^T Q A - mu Q <= 0`` with mu >= 0
(discrete) or ``A^T Q + Q A - eta Q <= 0`` with eta real (continuous). The
largest eigenvalue of either family is convex in the scalar, so the scalar
is found by a golden-section search over the necessity interval derived
from the eigenvectors of Q. The discrete Lorenz cone adds two orientation
scalars that rule out maps onto -C_L.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

from numpy.typing import ArrayLike

from invkit.conditions.diagnostics import classify_mu_geometry
from invkit.conditions.models import (
    CheckReport,
    Refutation,
    ScalarInterval,
    ScalarKind,
    ScalarLMICertificate,
    SufficientOnlyCertificate,
)
from invkit.conditions.search import SearchResult, largest_feasible, ternary_minimize
from invkit.conditions.verify import (
    certified_report,
    continuous_lmi,
    discrete_lmi,
    lorenz_scalars,
    refuted_report,
    system_matrix,
)
from invkit.conditions.witness import sample_continuous_escape, sample_discrete_escape
from invkit.config import DEFAULT_WITNESS_BUDGET, Tolerances
from invkit.numerics import FloatArray, lambda_max, scale_of, symmetrize
from invkit.problem import TimeRegime
from invkit.sets import DoubleCone, LorenzCone, axis_point

logger = logging.getLogger(__name__)

QuadricCone = LorenzCone | DoubleCone


class MuMode(StrEnum):
    """Which necessity bounds to use for mu."""

    FULL = "full"
    SIMPLE = "simple"


def mu_interval(a: ArrayLike, cone: QuadricCone, mode: MuMode = MuMode.FULL) -> ScalarInterval:
    """Necessity interval for mu in ``A^T Q A - mu Q <= 0``.

    With K = A^T Q A and (lambda_i, u_i) the eigenpairs of Q, hi is
    u_n^T K u_n / lambda_n. The full lower bound is
    max(0, max_{i<n} u_i^T K u_i / lambda_i); the simple one is 0.

    Raises:
        WrongInertiaError: If Q does not have inertia (n-1, 0, 1).

    Example:
        ```python
        cone = LorenzCone(np.diag([1.0, 1.0, -1.0]))
        mu_interval(np.diag([2.0, 1.0, 1.0]), cone)  # lo = 4, hi = 1: empty
        ```
    """
    matrix = system_matrix(a, cone)
    form = cone.require_standard()
    k = matrix.T @ cone.q @ matrix
    u = form.eigenvectors
    ratios = [float(u[:, i] @ k @ u[:, i]) / float(form.eigenvalues[i]) for i in range(cone.dim)]
    hi = ratios[-1]
    lo = 0.0
    if mode is MuMode.FULL:
        lo = max([0.0, *ratios[:-1]])
    return ScalarInterval(lo=lo, hi=hi)


def eta_interval(a: ArrayLike, cone: QuadricCone) -> ScalarInterval:
    """Necessity interval for eta in ``A^T Q + Q A - eta Q <= 0``.

    max_{i<n} u_i^T (A + A^T) u_i <= eta <= u_n^T (A + A^T) u_n.

    Raises:
        WrongInertiaError: If Q does not have inertia (n-1, 0, 1).
    """
    matrix = system_matrix(a, cone)
    form = cone.require_standard()
    s = matrix + matrix.T
    u = form.eigenvectors
    values = [float(u[:, i] @ s @ u[:, i]) for i in range(cone.dim)]
    return ScalarInterval(lo=max(values[:-1]), hi=values[-1])


@dataclass(frozen=True)
class _ScalarSearch:
    interval: ScalarInterval
    best: SearchResult | None
    band: float

    @property
    def feasible(self) -> bool:
        return self.best is not None and self.best.value <= self.band

    def trace(self) -> dict[str, Any]:
        trace: dict[str, Any] = {"interval": self.interval.to_dict(), "band": self.band}
        if self.best is not None:
            trace["argmin"] = self.best.argmin
            trace["min_lambda_max"] = self.best.value
        return trace


def _interval_slack(interval: ScalarInterval, psd_tol: float) -> float:
    return psd_tol * (1.0 + max(abs(interval.lo), abs(interval.hi)))


def _search(
    lmi: Callable[[float], FloatArray],
    interval: ScalarInterval,
    tolerances: Tolerances,
) -> _ScalarSearch:
    """Minimize lambda_1 of an affine LMI family over a necessity interval."""
    if interval.is_empty(_interval_slack(interval, tolerances.psd_tol)):
        return _ScalarSearch(interval=interval, best=None, band=0.0)
    lo, hi = sorted((interval.lo, interval.hi))

    def objective(t: float) -> float:
        return lambda_max(lmi(t), tolerances.eig_tol)

    best = ternary_minimize(objective, lo, hi, tolerances.mu_search_tol)
    band = tolerances.psd_tol * scale_of(lmi(best.argmin))
    return _ScalarSearch(interval=interval, best=best, band=band)


def _mu_search(matrix: FloatArray, cone: QuadricCone, tolerances: Tolerances) -> _ScalarSearch:
    return _search(
        lambda mu: discrete_lmi(matrix, cone.q, mu), mu_interval(matrix, cone), tolerances
    )


# ---------------------------------------------------------------------------
# Discrete time
# ---------------------------------------------------------------------------


def check_discrete_double_cone(
    a: ArrayLike,
    d: DoubleCone,
    tolerances: Tolerances | None = None,
    *,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
) -> CheckReport:
    """Decide invariance of ``{x | x^T Q x <= 0}`` under x_{k+1} = A x_k.

    Invariant iff some mu >= 0 in the full necessity interval makes
    A^T Q A - mu Q negative semidefinite. An empty interval is an immediate
    NotInvariant.
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, d)
    checker = "check_discrete_double_cone"
    search = _mu_search(matrix, d, tolerances)
    diagnostics: dict[str, Any] = {
        "mu_interval": search.interval.to_dict(),
        "mu_interval_simple": mu_interval(matrix, d, MuMode.SIMPLE).to_dict(),
    }

    if search.feasible:
        assert search.best is not None
        certificate = ScalarLMICertificate(
            scalar=ScalarKind.MU, value=search.best.argmin, lmi_lambda_max=search.best.value
        )
        diagnostics["mu_star"] = search.best.argmin
        return certified_report(
            matrix, d, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    reason = "mu interval is empty" if search.best is None else "LMI infeasible on the interval"
    refutation = Refutation(
        failed_conditions=(reason,),
        witness=sample_discrete_escape(matrix, d, tolerances, budget=witness_budget, seed=seed),
        trace=search.trace(),
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )


def check_discrete_lorenz(
    a: ArrayLike,
    c: LorenzCone,
    tolerances: Tolerances | None = None,
    *,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
) -> CheckReport:
    """Decide invariance of a Lorenz cone under x_{k+1} = A x_k.

    Three conditions must hold: the mu-LMI (as for the double cone),
    u_n^T A u_n >= 0 and u_n^T A Q^{-1} A^T u_n <= 0, where u_n is oriented
    so that the cone contains +u_n. The two scalars are accepted within
    psd_tol * (1 + ||M||_F) of their matrices.

    Raises:
        WrongInertiaError: If Q does not have inertia (n-1, 0, 1).

    Example:
        ```python
        cone = LorenzCone(np.diag([1.0, 1.0, -1.0]))
        report = check_discrete_lorenz(np.diag([1.0, 1.0, -1.0]), cone)
        report.refutation.failed_conditions  # ("u_n^T A u_n < 0",)
        ```
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, c)
    checker = "check_discrete_lorenz"
    search = _mu_search(matrix, c, tolerances)
    axis_gain, axis_scale, dual_gain, dual_scale = lorenz_scalars(matrix, c)
    diagnostics: dict[str, Any] = {
        "mu_interval": search.interval.to_dict(),
        "mu_interval_simple": mu_interval(matrix, c, MuMode.SIMPLE).to_dict(),
        "axis_gain": axis_gain,
        "dual_gain": dual_gain,
        "geometry": classify_mu_geometry(matrix, c, tolerances).to_dict(),
    }

    failed: list[str] = []
    if not search.feasible:
        failed.append("no mu >= 0 makes A^T Q A - mu Q negative semidefinite")
    if axis_gain < -tolerances.psd_tol * axis_scale:
        failed.append("u_n^T A u_n < 0")
    if dual_gain > tolerances.psd_tol * dual_scale:
        failed.append("u_n^T A Q^-1 A^T u_n > 0")

    if not failed:
        assert search.best is not None
        diagnostics["mu_star"] = search.best.argmin
        certificate = ScalarLMICertificate(
            scalar=ScalarKind.MU,
            value=search.best.argmin,
            lmi_lambda_max=search.best.value,
            side_conditions={"axis_gain": axis_gain, "dual_gain": dual_gain},
        )
        return certified_report(
            matrix, c, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    witness = sample_discrete_escape(
        matrix, c, tolerances, budget=witness_budget, seed=seed, first=[axis_point(c)]
    )
    refutation = Refutation(
        failed_conditions=tuple(failed),
        witness=witness,
        trace={**search.trace(), "axis_gain": axis_gain, "dual_gain": dual_gain},
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )


def check_discrete_lorenz_sufficient(
    a: ArrayLike,
    c: LorenzCone,
    tolerances: Tolerances | None = None,
) -> CheckReport | None:
    """Shortcut for singular dynamics: lambda_1(A^T Q A) <= 0.

    A^T Q A <= 0 maps C_L into C_L or -C_L, so the orientation scalars of
    :func:`check_discrete_lorenz` are required as well. Returns an
    Invariant report, or None when the shortcut does not apply; the
    condition is sufficient only and never yields NotInvariant.
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, c)
    checker = "check_discrete_lorenz_sufficient"
    product = symmetrize(matrix.T @ c.q @ matrix)
    top = lambda_max(product, tolerances.eig_tol)
    axis_gain, axis_scale, dual_gain, dual_scale = lorenz_scalars(matrix, c)
    if (
        top > tolerances.psd_tol * scale_of(product)
        or axis_gain < -tolerances.psd_tol * axis_scale
        or dual_gain > tolerances.psd_tol * dual_scale
    ):
        logger.debug("%s: not applicable (lambda_1(A^T Q A) = %.6g)", checker, top)
        return None
    certificate = SufficientOnlyCertificate(
        lambda_max=top, side_conditions={"axis_gain": axis_gain, "dual_gain": dual_gain}
    )
    return certified_report(
        matrix, c, TimeRegime.DISCRETE, certificate,
        checker=checker, tolerances=tolerances, diagnostics={"lambda_max": top}, started=started,
    )


# ---------------------------------------------------------------------------
# Continuous time
# ---------------------------------------------------------------------------


def _check_continuous_cone(
    a: ArrayLike,
    cone: QuadricCone,
    tolerances: Tolerances | None,
    *,
    checker: str,
    witness_budget: int,
    seed: int,
) -> CheckReport:
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, cone)

    def lmi(eta: float) -> FloatArray:
        return continuous_lmi(matrix, cone.q, eta)

    search = _search(lmi, eta_interval(matrix, cone), tolerances)
    diagnostics: dict[str, Any] = {"eta_interval": search.interval.to_dict()}

    if search.feasible:
        assert search.best is not None
        hi = max(search.interval.lo, search.interval.hi)
        level = max(search.best.value, 0.0)
        eta = largest_feasible(
            lambda t: lambda_max(lmi(t), tolerances.eig_tol),
            search.best.argmin,
            hi,
            level,
            tolerances.mu_search_tol,
        )
        diagnostics["eta_star"] = eta
        diagnostics["eta_sign"] = "nonnegative" if eta >= 0.0 else "negative"
        if isinstance(cone, LorenzCone):
            diagnostics["single_nappe"] = (
                "trajectories cannot cross between nappes without passing the origin, "
                "an equilibrium, so the double-cone condition decides the Lorenz cone"
            )
        certificate = ScalarLMICertificate(
            scalar=ScalarKind.ETA,
            value=eta,
            lmi_lambda_max=lambda_max(lmi(eta), tolerances.eig_tol),
        )
        return certified_report(
            matrix, cone, TimeRegime.CONTINUOUS, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    reason = "eta interval is empty" if search.best is None else "LMI infeasible on the interval"
    refutation = Refutation(
        failed_conditions=(reason,),
        witness=sample_continuous_escape(
            matrix, cone, tolerances, budget=witness_budget, seed=seed
        ),
        trace=search.trace(),
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started
    )


def check_continuous_double_cone(
    a: ArrayLike,
    d: DoubleCone,
    tolerances: Tolerances | None = None,
    *,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
) -> CheckReport:
    """Decide invariance of a double cone under x' = A x.

    Invariant iff some real eta in the necessity interval makes
    A^T Q + Q A - eta Q negative semidefinite. The certificate carries the
    largest such eta found; its sign is reported but not required.
    """
    return _check_continuous_cone(
        a, d, tolerances,
        checker="check_continuous_double_cone", witness_budget=witness_budget, seed=seed,
    )


def check_continuous_lorenz(
    a: ArrayLike,
    c: LorenzCone,
    tolerances: Tolerances | None = None,
    *,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
) -> CheckReport:
    """Decide invariance of a Lorenz cone under x' = A x.

    Same decision procedure as :func:`check_continuous_double_cone`: the
    origin is an equilibrium, so no trajectory moves from C_L to -C_L.

    Example:
        ```python
        spiral = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        cone = LorenzCone(np.diag([1.0, 1.0, -1.0]))
        check_continuous_lorenz(spiral, cone).diagnostics["eta_star"]  # 2.0
        ```
    """
    return _check_continuous_cone(
        a, c, tolerances,
        checker="check_continuous_lorenz", witness_budget=witness_budget, seed=seed,
    )
