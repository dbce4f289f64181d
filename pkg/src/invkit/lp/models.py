"""Data models for the LP feasibility module."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from invkit.numerics import FloatArray


class LPShapeError(ValueError):
    """Raised when program blocks have inconsistent dimensions or non-finite entries."""


class VarSign(StrEnum):
    """Sign restriction of an LP variable."""

    NONNEGATIVE = "nonnegative"
    FREE = "free"


def _block(matrix: ArrayLike | None, num_vars: int, name: str) -> FloatArray:
    if matrix is None:
        return np.zeros((0, num_vars))
    arr = np.array(matrix, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != num_vars:
        raise LPShapeError(f"{name} must have {num_vars} columns, got shape {arr.shape}")
    return arr


def _rhs(vector: ArrayLike | None, rows: int, name: str) -> FloatArray:
    if vector is None:
        vector = np.zeros(rows)
    arr = np.array(vector, dtype=np.float64).reshape(-1)
    if arr.shape[0] != rows:
        raise LPShapeError(f"{name} must have {rows} entries, got {arr.shape[0]}")
    return arr


@dataclass(frozen=True, eq=False)
class LinearProgramFeas:
    """Feasibility program ``E z = f, C z <= d`` with per-variable signs.

    Attributes:
        eq_matrix: Equality block E (k x N, k may be 0).
        eq_rhs: Equality right-hand side f.
        ineq_matrix: Inequality block C (r x N, r may be 0).
        ineq_rhs: Inequality right-hand side d.
        signs: Sign restriction of each of the N variables.
    """

    eq_matrix: FloatArray
    eq_rhs: FloatArray
    ineq_matrix: FloatArray
    ineq_rhs: FloatArray
    signs: tuple[VarSign, ...]

    def __post_init__(self) -> None:
        n = len(self.signs)
        if n < 1:
            raise LPShapeError("program needs at least one variable")
        if self.eq_matrix.ndim != 2 or self.eq_matrix.shape[1] != n:
            raise LPShapeError(f"equality block must have {n} columns")
        if self.ineq_matrix.ndim != 2 or self.ineq_matrix.shape[1] != n:
            raise LPShapeError(f"inequality block must have {n} columns")
        if self.eq_rhs.shape != (self.eq_matrix.shape[0],):
            raise LPShapeError("equality right-hand side does not match the block")
        if self.ineq_rhs.shape != (self.ineq_matrix.shape[0],):
            raise LPShapeError("inequality right-hand side does not match the block")
        for block in (self.eq_matrix, self.eq_rhs, self.ineq_matrix, self.ineq_rhs):
            if not np.all(np.isfinite(block)):
                raise LPShapeError("program has non-finite entries")

    @classmethod
    def build(
        cls,
        num_vars: int,
        *,
        eq_matrix: ArrayLike | None = None,
        eq_rhs: ArrayLike | None = None,
        ineq_matrix: ArrayLike | None = None,
        ineq_rhs: ArrayLike | None = None,
        free: Sequence[int] = (),
    ) -> LinearProgramFeas:
        """Assemble a program; variables are nonnegative unless listed in ``free``."""
        eq = _block(eq_matrix, num_vars, "eq_matrix")
        ineq = _block(ineq_matrix, num_vars, "ineq_matrix")
        free_set = set(free)
        signs = tuple(
            VarSign.FREE if j in free_set else VarSign.NONNEGATIVE for j in range(num_vars)
        )
        return cls(
            eq_matrix=eq,
            eq_rhs=_rhs(eq_rhs, eq.shape[0], "eq_rhs"),
            ineq_matrix=ineq,
            ineq_rhs=_rhs(ineq_rhs, ineq.shape[0], "ineq_rhs"),
            signs=signs,
        )

    @property
    def num_vars(self) -> int:
        """Return the number of variables."""
        return len(self.signs)

    @property
    def num_rows(self) -> int:
        """Return the number of equality plus inequality rows."""
        return int(self.eq_matrix.shape[0] + self.ineq_matrix.shape[0])

    @property
    def nonnegative_mask(self) -> NDArray[np.bool_]:
        """Return a boolean mask of sign-restricted variables."""
        return np.array([s is VarSign.NONNEGATIVE for s in self.signs], dtype=bool)

    def violation(self, z: FloatArray) -> float:
        """Return the largest constraint violation of z (0 when feasible)."""
        worst = 0.0
        if self.eq_matrix.shape[0]:
            worst = max(worst, float(np.max(np.abs(self.eq_matrix @ z - self.eq_rhs))))
        if self.ineq_matrix.shape[0]:
            worst = max(worst, float(np.max(self.ineq_matrix @ z - self.ineq_rhs)))
        mask = self.nonnegative_mask
        if np.any(mask):
            worst = max(worst, float(np.max(-z[mask])))
        return worst


@dataclass(frozen=True, eq=False)
class Feasible:
    """Feasible outcome with a point satisfying every constraint."""

    point: FloatArray


@dataclass(frozen=True, eq=False)
class Infeasible:
    """Infeasible outcome with a dual vector over the [equality; inequality] rows.

    The dual y satisfies ``M^T y <= 0`` on nonnegative columns, ``M^T y = 0``
    on free columns, ``y <= 0`` on inequality rows and ``r^T y > 0``, where
    M and r stack the equality and inequality blocks.
    """

    dual: FloatArray


@dataclass(frozen=True, eq=False)
class Primal:
    """Farkas branch 1: ``P z = d, z >= 0``."""

    z: FloatArray


@dataclass(frozen=True, eq=False)
class Alternative:
    """Farkas branch 2: ``P^T y <= 0, d^T y > 0``."""

    y: FloatArray


@dataclass(frozen=True, eq=False)
class Optimum:
    """Finite optimum of a linear maximization."""

    point: FloatArray
    value: float


@dataclass(frozen=True, eq=False)
class Unbounded:
    """Unbounded maximization: c^T (point + t * direction) grows without bound."""

    point: FloatArray
    direction: FloatArray


FeasOutcome = Feasible | Infeasible
FarkasOutcome = Primal | Alternative
OptimizeOutcome = Optimum | Unbounded | Infeasible
