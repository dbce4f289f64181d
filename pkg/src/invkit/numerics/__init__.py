"""Dense linear algebra kernel - eigen-decomposition, solves, exponential."""

from invkit.numerics.linalg import (
    MatrixOverflowError,
    NoConvergenceError,
    NotSymmetricError,
    NumericsError,
    ShapeError,
    SingularMatrixError,
    as_matrix,
    as_vector,
    classify_margin,
    definiteness,
    frobenius,
    inertia,
    invert,
    lambda_max,
    mat_exp,
    max_abs,
    scale_of,
    solve,
    sym_eig,
    sym_function,
    symmetrize,
)
from invkit.numerics.models import Definiteness, FloatArray, Inertia, SymEig

__all__ = [
    "Definiteness",
    "FloatArray",
    "Inertia",
    "MatrixOverflowError",
    "NoConvergenceError",
    "NotSymmetricError",
    "NumericsError",
    "ShapeError",
    "SingularMatrixError",
    "SymEig",
    "as_matrix",
    "as_vector",
    "classify_margin",
    "definiteness",
    "frobenius",
    "inertia",
    "invert",
    "lambda_max",
    "mat_exp",
    "max_abs",
    "scale_of",
    "solve",
    "sym_eig",
    "sym_function",
    "symmetrize",
]
