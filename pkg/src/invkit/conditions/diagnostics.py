"""Diagnostic operations for quadric sets.

None of these decide invariance. They explain the scalar intervals
geometrically, cross-check the dual half-space reading of the Lorenz
orientation condition by sampling, and test whether solutions started on
the boundary of an ellipsoid or cone stay on it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from invkit.conditions.models import ScalarInterval
from invkit.conditions.verify import lorenz_scalars, system_matrix
from invkit.config import DEFAULT_PSD_TOL, Tolerances
from invkit.numerics import FloatArray, MatrixOverflowError, as_matrix, max_abs, scale_of
from invkit.sets import DoubleCone, LorenzCone, MembershipClass, membership, sample_members

logger = logging.getLogger(__name__)

DEFAULT_HALFSPACE_SAMPLES = 200


class MuCase(StrEnum):
    """Conclusion about mu drawn from where A maps the eigenvectors of Q."""

    NO_MU = "mu does not exist"
    MU_ZERO = "mu = 0"
    MU_UP_TO_HI = "mu in [0, hi]"
    MU_FROM_LO_TO_HI = "mu in [lo, hi]"


@dataclass(frozen=True)
class MuGeometry:
    """Geometric classification of the mu interval.

    Attributes:
        images: Classification of A u_i relative to C_L u (-C_L), per i.
        ratios: u_i^T A^T Q A u_i / lambda_i, per i.
        lorenz_case: Conclusion from A u_n alone.
        double_cone_case: Conclusion from the full case table.
        implied: Interval implied by double_cone_case (None when mu does not exist).
    """

    images: tuple[MembershipClass, ...]
    ratios: tuple[float, ...]
    lorenz_case: MuCase
    double_cone_case: MuCase
    implied: ScalarInterval | None = None

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "images": [str(c) for c in self.images],
            "ratios": list(self.ratios),
            "lorenz_case": str(self.lorenz_case),
            "double_cone_case": str(self.double_cone_case),
            "implied": self.implied.to_dict() if self.implied else None,
        }


def classify_mu_geometry(
    a: ArrayLike,
    cone: LorenzCone | DoubleCone,
    tolerances: Tolerances | None = None,
) -> MuGeometry:
    """Classify each A u_i against C_L u (-C_L) and read off the mu conclusion.

    With I the indices i < n whose image lies outside the double cone:
    A u_n outside gives no mu. With I empty, A u_n on the boundary gives
    mu = 0 and A u_n inside gives [0, hi]. With I nonempty, A u_n on the
    boundary gives no mu; inside, mu lies in [max_I ratio_i, hi] unless
    that interval is empty. The Lorenz reading uses A u_n alone.

    The result is diagnostic only and never overrides a checker.
    """
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, cone)
    form = cone.require_standard()
    double = cone if isinstance(cone, DoubleCone) else DoubleCone(q=cone.q, axis=cone.axis)
    k = matrix.T @ cone.q @ matrix
    n = cone.dim
    images: list[MembershipClass] = []
    ratios: list[float] = []
    for i in range(n):
        u = form.eigenvectors[:, i]
        images.append(membership(double, matrix @ u, tolerances=tolerances).classification)
        ratios.append(float(u @ k @ u) / float(form.eigenvalues[i]))
    hi = ratios[-1]
    top = images[-1]

    if top is MembershipClass.OUTSIDE:
        lorenz_case = MuCase.NO_MU
    elif top is MembershipClass.BOUNDARY:
        lorenz_case = MuCase.MU_ZERO
    else:
        lorenz_case = MuCase.MU_UP_TO_HI

    outside = [i for i in range(n - 1) if images[i] is MembershipClass.OUTSIDE]
    implied: ScalarInterval | None = None
    if top is MembershipClass.OUTSIDE:
        double_case = MuCase.NO_MU
    elif not outside:
        double_case = lorenz_case
        implied = ScalarInterval(0.0, 0.0 if top is MembershipClass.BOUNDARY else hi)
    elif top is MembershipClass.BOUNDARY:
        double_case = MuCase.NO_MU
    else:
        lo = max(ratios[i] for i in outside)
        slack = tolerances.psd_tol * (1.0 + abs(hi))
        if lo > hi + slack:
            double_case = MuCase.NO_MU
        else:
            double_case = MuCase.MU_FROM_LO_TO_HI
            implied = ScalarInterval(lo, hi)

    logger.debug("mu geometry: lorenz %s, double cone %s", lorenz_case, double_case)
    return MuGeometry(
        images=tuple(images),
        ratios=tuple(ratios),
        lorenz_case=lorenz_case,
        double_cone_case=double_case,
        implied=implied,
    )


class HalfspaceOrientation(StrEnum):
    """Which nappe satisfies u_n^T A x >= 0 on the sampled cone."""

    POSITIVE = "C_L"
    NEGATIVE = "-C_L"
    BOTH = "both"
    NONE = "none"


@dataclass(frozen=True)
class DualHalfspaceCheck:
    """Scalar dual-cone condition cross-checked against samples.

    ``holds`` is the scalar test u_n^T A Q^{-1} A^T u_n <= 0. It holds
    exactly when the sampled values of u_n^T A x keep one sign on C_L;
    ``orientation`` tells which sign, ``consistent`` whether scalar and
    samples agree.
    """

    holds: bool
    scalar: float
    orientation: HalfspaceOrientation
    consistent: bool
    sampled_min: float
    sampled_max: float
    violating_sample: FloatArray | None = field(default=None, compare=False)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "holds": self.holds,
            "scalar": self.scalar,
            "orientation": str(self.orientation),
            "consistent": self.consistent,
            "sampled_min": self.sampled_min,
            "sampled_max": self.sampled_max,
            "violating_sample": (
                self.violating_sample.tolist() if self.violating_sample is not None else None
            ),
        }


def check_dual_halfspace(
    a: ArrayLike,
    cone: LorenzCone,
    samples: int = DEFAULT_HALFSPACE_SAMPLES,
    seed: int = 0,
    tolerances: Tolerances | None = None,
) -> DualHalfspaceCheck:
    """Compare u_n^T A Q^{-1} A^T u_n <= 0 with sampled signs of u_n^T A x on C_L.

    Example:
        ```python
        cone = LorenzCone(np.diag([1.0, 1.0, -1.0]))
        check_dual_halfspace(np.diag([1.0, 1.0, -1.0]), cone).orientation  # "-C_L"
        ```
    """
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, cone)
    u_n = cone.require_standard().u_n
    _, _, scalar, scalar_scale = lorenz_scalars(matrix, cone)
    holds = scalar <= tolerances.psd_tol * scalar_scale

    points = sample_members(cone, samples, seed, tolerances=tolerances)
    values = points @ (matrix.T @ u_n)
    norms = 1.0 + np.linalg.norm(points, axis=1)
    band = tolerances.membership_tol * scale_of(matrix) * norms
    nonneg = bool(np.all(values >= -band))
    nonpos = bool(np.all(values <= band))
    if nonneg and nonpos:
        orientation = HalfspaceOrientation.BOTH
    elif nonneg:
        orientation = HalfspaceOrientation.POSITIVE
    elif nonpos:
        orientation = HalfspaceOrientation.NEGATIVE
    else:
        orientation = HalfspaceOrientation.NONE

    violating = None
    if orientation in (HalfspaceOrientation.NEGATIVE, HalfspaceOrientation.NONE):
        violating = points[int(np.argmin(values))].copy()
    consistent = holds == (orientation is not HalfspaceOrientation.NONE)
    if not consistent:
        logger.warning(
            "Dual half-space scalar %.6g disagrees with sampled orientation %s", scalar, orientation
        )
    return DualHalfspaceCheck(
        holds=holds,
        scalar=scalar,
        orientation=orientation,
        consistent=consistent,
        sampled_min=float(np.min(values)),
        sampled_max=float(np.max(values)),
        violating_sample=violating,
    )


@dataclass(frozen=True)
class BoundaryFlowResult:
    """Residuals ||Q~_{k-1}||_max for k = 2..k_max."""

    preserved: bool
    residuals: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {"preserved": self.preserved, "residuals": list(self.residuals)}


def boundary_flow_term(powers: list[FloatArray], q: FloatArray, k: int) -> FloatArray:
    """Return Q~_{k-1} = sum_{i<k} (A^i)^T Q A^{k-1-i} / (i! (k-1-i)!)."""
    term = np.zeros_like(q)
    for i in range(k):
        j = k - 1 - i
        term += (powers[i].T @ q @ powers[j]) / (math.factorial(i) * math.factorial(j))
    return term


def check_boundary_flow(
    a: ArrayLike,
    q: ArrayLike,
    k_max: int,
    tol: float = DEFAULT_PSD_TOL,
) -> BoundaryFlowResult:
    """Test whether solutions started on {x^T Q x = 1} (or = 0) stay on it.

    The quadratic form along e^{At} x has Taylor coefficients
    x^T Q~_{k-1} x; the boundary is preserved iff every Q~_{k-1} vanishes.
    The k = 2 term is the Lyapunov operator A^T Q + Q A.

    Args:
        a: System matrix.
        q: Symmetric matrix of the ellipsoid or cone.
        k_max: Highest k tested (at least 2).
        tol: Residuals must stay within tol * (1 + ||Q||_F).

    Raises:
        ValueError: If k_max < 2.
        MatrixOverflowError: If a power of A overflows.
    """
    if k_max < 2:
        raise ValueError(f"k_max must be at least 2, got {k_max}")
    quad = as_matrix(q, square=True, name="Q")
    matrix = as_matrix(a, square=True, name="A")
    if matrix.shape != quad.shape:
        raise ValueError(f"A has shape {matrix.shape} but Q has shape {quad.shape}")
    powers = [np.eye(matrix.shape[0])]
    for _ in range(k_max - 1):
        powers.append(powers[-1] @ matrix)
        if not np.all(np.isfinite(powers[-1])):
            raise MatrixOverflowError(f"A^{len(powers) - 1} overflows")
    band = tol * scale_of(quad)
    residuals = []
    for k in range(2, k_max + 1):
        term = boundary_flow_term(powers, quad, k)
        if not np.all(np.isfinite(term)):
            raise MatrixOverflowError(f"boundary-flow term for k = {k} overflows")
        residuals.append(max_abs(term))
    preserved = all(r <= band for r in residuals)
    return BoundaryFlowResult(preserved=preserved, residuals=tuple(residuals))
