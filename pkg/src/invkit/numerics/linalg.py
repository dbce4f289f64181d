"""Dense real linear algebra kernel.

Provides the symmetric eigen-decomposition (cyclic Jacobi rotations with a
fixed sweep order, so results are reproducible for a given build), inertia
and definiteness tests, Gaussian elimination with partial pivoting and the
matrix exponential by scaling and squaring of a truncated Taylor series.

Every tolerance comparison is relative to ``1 + ||M||_F``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike

from invkit.config import (
    DEFAULT_EIG_TOL,
    DEFAULT_EXP_TOL,
    DEFAULT_INERTIA_TOL,
    DEFAULT_PSD_TOL,
    DEFAULT_SINGULAR_TOL,
)
from invkit.numerics.models import Definiteness, FloatArray, Inertia, SymEig

logger = logging.getLogger(__name__)

MAX_JACOBI_SWEEPS = 100
EXP_SCALED_NORM = 0.5  # ||X / 2^s||_1 is brought below this before the series
MAX_EXP_SQUARINGS = 64
MAX_TAYLOR_DEGREE = 30
EPS = float(np.finfo(np.float64).eps)


class NumericsError(Exception):
    """Base exception for numerics errors."""


class NotSymmetricError(NumericsError):
    """Raised when a matrix required to be symmetric is not."""


class NoConvergenceError(NumericsError):
    """Raised when the Jacobi iteration exhausts its sweep budget."""


class SingularMatrixError(NumericsError):
    """Raised when elimination meets a pivot below the singular threshold."""


class MatrixOverflowError(NumericsError):
    """Raised when a computation leaves the representable range."""


class ShapeError(NumericsError):
    """Raised when an input does not have the required shape."""


def as_matrix(m: ArrayLike, *, square: bool = False, name: str = "matrix") -> FloatArray:
    """Convert input to a finite 2-D float array.

    Args:
        m: Anything numpy can turn into a 2-D array.
        square: Require a square matrix.
        name: Name used in error messages.

    Returns:
        A fresh float64 array.

    Raises:
        ShapeError: If the input is not a finite nonempty 2-D array.
    """
    arr = np.array(m, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} has non-finite entries")
    return arr


def as_vector(v: ArrayLike, *, name: str = "vector") -> FloatArray:
    """Convert input to a finite 1-D float array."""
    arr = np.array(v, dtype=np.float64).reshape(-1)
    if arr.shape[0] < 1:
        raise ShapeError(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} has non-finite entries")
    return arr


def frobenius(m: FloatArray) -> float:
    """Return the Frobenius norm."""
    return float(np.sqrt(np.sum(m * m)))


def max_abs(m: FloatArray) -> float:
    """Return the largest absolute entry (0 for empty input)."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def scale_of(m: FloatArray) -> float:
    """Return the tolerance scale 1 + ||M||_F."""
    return 1.0 + frobenius(m)


def symmetrize(m: FloatArray) -> FloatArray:
    """Return (M + M^T) / 2."""
    result: FloatArray = 0.5 * (m + m.T)
    return result


def _normalize_signs(vectors: FloatArray) -> None:
    # Largest-magnitude component of each column made positive.
    for j in range(vectors.shape[1]):
        column = vectors[:, j]
        k = int(np.argmax(np.abs(column)))
        if column[k] < 0.0:
            vectors[:, j] = -column


def _off_diagonal_norm(a: FloatArray) -> float:
    # Frobenius norm of the strict off-diagonal part, summed directly.
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def sym_eig(
    m: ArrayLike,
    eig_tol: float = DEFAULT_EIG_TOL,
    *,
    max_sweeps: int = MAX_JACOBI_SWEEPS,
) -> SymEig:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Rotations sweep the strict upper triangle row by row. Eigenvalues are
    returned in descending order and each eigenvector has its
    largest-magnitude component positive.

    Args:
        m: Square symmetric matrix.
        eig_tol: Symmetry and convergence tolerance, relative to 1 + ||M||_F.
        max_sweeps: Sweep budget.

    Returns:
        SymEig with descending eigenvalues and orthonormal eigenvectors.

    Raises:
        NotSymmetricError: If ||M - M^T||_max exceeds eig_tol * (1 + ||M||_F).
        NoConvergenceError: If the sweep budget is exhausted.

    Example:
        ```python
        eig = sym_eig([[2.0, 1.0], [1.0, 2.0]])
        eig.eigenvalues  # array([3., 1.])
        ```
    """
    a = as_matrix(m, square=True)
    scale = scale_of(a)
    asym = max_abs(a - a.T)
    if asym > eig_tol * scale:
        raise NotSymmetricError(f"matrix is not symmetric: ||M - M^T||_max = {asym:.3e}")
    a = symmetrize(a)
    n = a.shape[0]
    v = np.eye(n)
    target = max(1e-2 * eig_tol, 4.0 * EPS) * scale

    converged = n == 1
    for sweep in range(max_sweeps):
        off = _off_diagonal_norm(a)
        if off <= target:
            converged = True
            logger.debug("Jacobi converged after %d sweeps (n=%d)", sweep, n)
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= EPS * 1e-3 * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    if not converged:
        off = _off_diagonal_norm(a)
        if off > target:
            raise NoConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps (off = {off:.3e})"
            )

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    vectors = v[:, order]
    _normalize_signs(vectors)
    return SymEig(eigenvalues=eigenvalues[order], eigenvectors=vectors)


def lambda_max(m: ArrayLike, eig_tol: float = DEFAULT_EIG_TOL) -> float:
    """Return the largest eigenvalue of a symmetric matrix."""
    return sym_eig(m, eig_tol).lambda_max


def inertia(
    m: ArrayLike,
    zero_tol: float = DEFAULT_INERTIA_TOL,
    *,
    eig_tol: float = DEFAULT_EIG_TOL,
) -> Inertia:
    """Count eigenvalues above, within and below the band ``zero_tol * (1 + ||M||_F)``.

    Raises:
        NotSymmetricError: Propagated from sym_eig.
        NoConvergenceError: Propagated from sym_eig.
    """
    a = as_matrix(m, square=True)
    band = zero_tol * scale_of(a)
    values = sym_eig(a, eig_tol).eigenvalues
    positive = int(np.sum(values > band))
    negative = int(np.sum(values < -band))
    return Inertia(positive=positive, zero=len(values) - positive - negative, negative=negative)


def classify_margin(value: float, band: float) -> Definiteness:
    """Classify a largest eigenvalue against a tolerance band."""
    if value <= -band:
        return Definiteness.NEG_SEMIDEFINITE
    if value >= band:
        return Definiteness.NOT_NEG_SEMIDEFINITE
    return Definiteness.MARGINAL


def definiteness(
    m: ArrayLike,
    psd_tol: float = DEFAULT_PSD_TOL,
    *,
    eig_tol: float = DEFAULT_EIG_TOL,
) -> Definiteness:
    """Tri-state test of M being negative semidefinite.

    NegSemidefinite iff lambda_1(M) <= -psd_tol * s, NotNegSemidefinite iff
    lambda_1(M) >= psd_tol * s, Marginal otherwise, with s = 1 + ||M||_F.
    A zero band (psd_tol = 0) classifies lambda_1 = 0 as NegSemidefinite.
    """
    a = as_matrix(m, square=True)
    return classify_margin(sym_eig(a, eig_tol).lambda_max, psd_tol * scale_of(a))


def sym_function(
    m: ArrayLike,
    func: Callable[[FloatArray], FloatArray],
    eig_tol: float = DEFAULT_EIG_TOL,
) -> FloatArray:
    """Apply a scalar function through the spectrum: U diag(f(lambda)) U^T."""
    eig = sym_eig(m, eig_tol)
    u = eig.eigenvectors
    result: FloatArray = symmetrize((u * func(eig.eigenvalues)) @ u.T)
    return result


def solve(
    m: ArrayLike,
    rhs: ArrayLike,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> FloatArray:
    """Solve M X = RHS by Gaussian elimination with partial pivoting.

    Args:
        m: Square coefficient matrix.
        rhs: Right-hand side vector or matrix.
        singular_tol: Pivots at or below singular_tol * ||M||_F are rejected.

    Returns:
        Solution with the shape of rhs.

    Raises:
        SingularMatrixError: If a pivot falls below the threshold.
    """
    a = as_matrix(m, square=True)
    b = np.array(rhs, dtype=np.float64)
    vector_rhs = b.ndim == 1
    if vector_rhs:
        b = b.reshape(-1, 1)
    n = a.shape[0]
    if b.shape[0] != n:
        raise ShapeError(f"right-hand side has {b.shape[0]} rows, expected {n}")
    threshold = singular_tol * frobenius(a)

    for k in range(n):
        pivot_row = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = a[pivot_row, k]
        if abs(pivot) <= threshold or pivot == 0.0:
            raise SingularMatrixError(
                f"pivot {abs(pivot):.3e} at column {k} below threshold {threshold:.3e}"
            )
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            b[[k, pivot_row]] = b[[pivot_row, k]]
        factors = a[k + 1 :, k] / pivot
        a[k + 1 :, k:] -= np.outer(factors, a[k, k:])
        b[k + 1 :] -= np.outer(factors, b[k])

    x = np.zeros_like(b)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]

    if not np.all(np.isfinite(x)):
        raise SingularMatrixError("solution is not finite")
    result: FloatArray = x.reshape(-1) if vector_rhs else x
    return result


def invert(m: ArrayLike, singular_tol: float = DEFAULT_SINGULAR_TOL) -> FloatArray:
    """Return M^{-1}.

    Raises:
        SingularMatrixError: If elimination meets a pivot below
            singular_tol * ||M||_F.
    """
    a = as_matrix(m, square=True)
    return solve(a, np.eye(a.shape[0]), singular_tol)


def _taylor_degree(theta: float, exp_tol: float) -> int:
    # Smallest q with theta^(q+1) / (q+1)! * e^theta <= exp_tol.
    term = math.exp(theta)
    for q in range(1, MAX_TAYLOR_DEGREE + 1):
        term *= theta / q
        if term * theta / (q + 1) <= exp_tol:
            return q
    return MAX_TAYLOR_DEGREE


def mat_exp(a: ArrayLike, t: float = 1.0, exp_tol: float = DEFAULT_EXP_TOL) -> FloatArray:
    """Matrix exponential e^{At} by scaling and squaring.

    X = A t is scaled by 2^-s until ||X / 2^s||_1 <= 0.5, a Taylor series of
    the smallest degree meeting exp_tol is evaluated by Horner's rule and
    the result is squared s times.

    Args:
        a: Square matrix.
        t: Finite time.
        exp_tol: Target relative truncation error.

    Returns:
        The matrix exponential.

    Raises:
        MatrixOverflowError: If ||At|| needs more than MAX_EXP_SQUARINGS
            squarings or the result is not finite.
    """
    x = as_matrix(a, square=True)
    if not math.isfinite(t):
        raise MatrixOverflowError(f"time must be finite, got {t}")
    x = x * t
    n = x.shape[0]
    norm = float(np.max(np.sum(np.abs(x), axis=0)))
    if not math.isfinite(norm):
        raise MatrixOverflowError("||At|| is not finite")

    squarings = 0
    if norm > EXP_SCALED_NORM:
        squarings = math.ceil(math.log2(norm / EXP_SCALED_NORM))
    if squarings > MAX_EXP_SQUARINGS:
        raise MatrixOverflowError(f"||At||_1 = {norm:.3e} exceeds the scaling budget")
    scaled = x / 2.0**squarings
    degree = _taylor_degree(norm / 2.0**squarings, exp_tol)

    result = np.eye(n)
    for k in range(degree, 0, -1):
        result = np.eye(n) + (scaled @ result) / k

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise MatrixOverflowError(f"e^(At) overflowed (||At||_1 = {norm:.3e})")
    return result
