"""Lorenz-cone standardization.

A symmetric Q with inertia (n-1, 0, 1) factors as Q = T^{-T} diag(1,...,1,-1) T^{-1},
so its Lorenz cone is the image of the standard cone
``{z | z_1^2 + ... + z_{n-1}^2 <= z_n^2, z_n >= 0}`` under T.
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from invkit.config import DEFAULT_EIG_TOL, DEFAULT_INERTIA_TOL
from invkit.numerics import FloatArray, as_matrix, scale_of, sym_eig
from invkit.sets.models import LorenzStandardForm, WrongInertiaError

logger = logging.getLogger(__name__)


def standard_cone_matrix(n: int) -> FloatArray:
    """Return diag(1, ..., 1, -1) of size n."""
    q = np.eye(n)
    q[-1, -1] = -1.0
    return q


def lorenz_standardize(
    q: ArrayLike,
    *,
    axis: ArrayLike | None = None,
    eig_tol: float = DEFAULT_EIG_TOL,
    zero_tol: float = DEFAULT_INERTIA_TOL,
) -> LorenzStandardForm:
    """Compute the transform T mapping the standard Lorenz cone onto the cone of Q.

    Args:
        q: Symmetric matrix with inertia (n-1, 0, 1).
        axis: Optional orientation hint; u_n is flipped so that u_n^T axis > 0.
        eig_tol: Eigen-solver tolerance.
        zero_tol: Band for counting zero eigenvalues.

    Returns:
        The standard form, with T^T Q T = diag(1, ..., 1, -1).

    Raises:
        WrongInertiaError: If Q does not have inertia (n-1, 0, 1).

    Example:
        ```python
        form = lorenz_standardize([[4.0, 0.0], [0.0, -1.0]])
        form.transform  # diag(0.5, 1.0)
        ```
    """
    matrix = as_matrix(q, square=True, name="Q")
    n = matrix.shape[0]
    if n < 2:
        raise WrongInertiaError("a Lorenz cone needs dimension at least 2")
    eig = sym_eig(matrix, eig_tol)
    values = eig.eigenvalues
    band = zero_tol * scale_of(matrix)
    positive = int(np.sum(values > band))
    negative = int(np.sum(values < -band))
    if positive != n - 1 or negative != 1:
        zero = n - positive - negative
        raise WrongInertiaError(
            f"inertia ({positive},{zero},{negative}) differs from ({n - 1},0,1)"
        )

    vectors = eig.eigenvectors.copy()
    u_n = vectors[:, -1]
    if axis is not None:
        hint = np.array(axis, dtype=np.float64).reshape(-1)
        if float(u_n @ hint) < 0.0:
            vectors[:, -1] = -u_n
    # Without a hint sym_eig already made the largest component of u_n positive.

    root = np.sqrt(np.abs(values))
    transform = vectors / root
    inverse = (vectors * root).T
    logger.debug("Standardized Lorenz cone: lambda_n = %.6g", values[-1])
    return LorenzStandardForm(
        eigenvalues=values.copy(),
        eigenvectors=vectors,
        transform=transform,
        inverse=inverse,
    )


def standardize_dynamics(a: ArrayLike, form: LorenzStandardForm) -> FloatArray:
    """Return T^{-1} A T, the dynamics seen in standard-cone coordinates.

    The cone of Q is invariant under A exactly when the standard cone is
    invariant under T^{-1} A T.
    """
    matrix = as_matrix(a, square=True, name="A")
    result: FloatArray = form.inverse @ matrix @ form.transform
    return result
