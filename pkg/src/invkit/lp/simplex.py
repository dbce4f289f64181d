"""Dense two-phase simplex tableau with Bland's anti-cycling rule.

The tableau works on the standard form ``M w = r, w >= 0``. Rows are
sign-normalized so that r >= 0 and one artificial column is appended per
row, giving an initial identity basis. The last tableau row holds the
reduced costs and the negated objective value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray

from invkit.config import DEFAULT_PIVOT_TOL
from invkit.numerics import FloatArray

logger = logging.getLogger(__name__)

RATIO_TIE_TOL = 1e-12  # relative tolerance for ties in the minimum ratio test
ITERATIONS_PER_COLUMN = 50


class LPError(Exception):
    """Base exception for LP errors."""


class NumericalBreakdownError(LPError):
    """Raised when the simplex iteration cannot make reliable progress."""


class StepStatus(StrEnum):
    """Outcome of a single simplex step."""

    PIVOTED = "pivoted"
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class PhaseResult:
    """Terminal state of one simplex phase.

    Attributes:
        status: OPTIMAL or UNBOUNDED.
        entering: Entering column that proved unboundedness, if any.
        iterations: Pivots performed in the phase.
    """

    status: StepStatus
    entering: int | None
    iterations: int


class SimplexTableau:
    """Full tableau over structural and artificial columns.

    Example:
        ```python
        tableau = SimplexTableau(matrix, rhs)
        tableau.run_phase_one()
        if tableau.objective_value > tol:
            dual = tableau.phase_one_dual()
        ```
    """

    def __init__(
        self,
        matrix: FloatArray,
        rhs: FloatArray,
        *,
        pivot_tol: float = DEFAULT_PIVOT_TOL,
        max_iterations: int | None = None,
    ) -> None:
        """Initialize the tableau with an artificial identity basis.

        Args:
            matrix: Standard-form constraint matrix M (m x k).
            rhs: Right-hand side r (length m).
            pivot_tol: Entries at or below this magnitude never pivot.
            max_iterations: Pivot budget per phase.
        """
        m, k = matrix.shape
        self.num_rows = m
        self.num_structural = k
        self.pivot_tol = pivot_tol
        self.max_iterations = max_iterations or ITERATIONS_PER_COLUMN * (m + k) + 100

        self.row_signs = np.where(rhs < 0.0, -1.0, 1.0)
        self.table = np.zeros((m + 1, k + m + 1))
        self.table[:m, :k] = matrix * self.row_signs[:, None]
        self.table[:m, k : k + m] = np.eye(m)
        self.table[:m, -1] = rhs * self.row_signs
        self.basis: list[int] = list(range(k, k + m))
        self.has_artificials = True

        cost = np.zeros(k + m)
        cost[k:] = 1.0
        self.set_objective(cost)

    @property
    def num_columns(self) -> int:
        """Return the number of columns excluding the right-hand side."""
        return int(self.table.shape[1] - 1)

    @property
    def objective_value(self) -> float:
        """Return the current (minimized) objective value."""
        return float(-self.table[-1, -1])

    def set_objective(self, cost: FloatArray) -> None:
        """Install a minimization objective and price out the basic columns."""
        row = np.zeros(self.table.shape[1])
        row[:-1] = cost
        for i, column in enumerate(self.basis):
            row -= cost[column] * self.table[i]
        self.table[-1] = row

    def pivot(self, i: int, j: int) -> None:
        """Pivot on entry (i, j), making column j basic in row i."""
        self.table[i] /= self.table[i, j]
        column = self.table[:, j].copy()
        column[i] = 0.0
        self.table -= np.outer(column, self.table[i])
        self.basis[i] = j

    def step(self, allowed: NDArray[np.bool_]) -> tuple[StepStatus, int | None]:
        """Perform one Bland step.

        The entering column is the lowest-index allowed column with negative
        reduced cost; the leaving row wins the minimum ratio test, ties going
        to the lowest basic index.
        """
        reduced = self.table[-1, :-1]
        candidates = np.flatnonzero(allowed & (reduced < -self.pivot_tol))
        if candidates.size == 0:
            return StepStatus.OPTIMAL, None
        j = int(candidates[0])

        column = self.table[:-1, j]
        rows = np.flatnonzero(column > self.pivot_tol)
        if rows.size == 0:
            return StepStatus.UNBOUNDED, j
        ratios = self.table[rows, -1] / column[rows]
        best = float(np.min(ratios))
        tied = rows[ratios <= best + RATIO_TIE_TOL * (1.0 + abs(best))]
        i = int(min(tied, key=lambda r: self.basis[r]))
        self.pivot(i, j)
        return StepStatus.PIVOTED, j

    def run(self, allowed: NDArray[np.bool_]) -> PhaseResult:
        """Iterate Bland steps until optimality or unboundedness.

        Raises:
            NumericalBreakdownError: If the pivot budget is exhausted.
        """
        for iteration in range(self.max_iterations):
            status, entering = self.step(allowed)
            if status is not StepStatus.PIVOTED:
                return PhaseResult(status=status, entering=entering, iterations=iteration)
        raise NumericalBreakdownError(
            f"simplex exceeded {self.max_iterations} pivots on a {self.table.shape} tableau"
        )

    def run_phase_one(self) -> PhaseResult:
        """Minimize the sum of artificials over all columns."""
        allowed = np.ones(self.num_columns, dtype=bool)
        result = self.run(allowed)
        logger.debug(
            "Phase 1 finished after %d pivots with residual %.3e",
            result.iterations,
            self.objective_value,
        )
        return result

    def phase_one_dual(self) -> FloatArray:
        """Return simplex multipliers in the caller's (unnormalized) row order.

        With unit artificial costs the reduced cost of artificial i equals
        1 - y_i.
        """
        k = self.num_structural
        y = 1.0 - self.table[-1, k : k + self.num_rows]
        dual: FloatArray = y * self.row_signs
        return dual

    def drop_artificials(self) -> list[int]:
        """Drive zero-level artificials out of the basis and delete their columns.

        Rows whose artificial cannot be replaced are linearly dependent on the
        others and are removed.

        Returns:
            Indices (in the original row order) of removed redundant rows.
        """
        k = self.num_structural
        redundant: list[int] = []
        for i in range(self.num_rows):
            if self.basis[i] < k:
                continue
            entries = np.abs(self.table[i, :k])
            candidates = np.flatnonzero(entries > self.pivot_tol)
            if candidates.size:
                self.pivot(i, int(candidates[0]))
            else:
                redundant.append(i)

        keep = [i for i in range(self.num_rows) if i not in redundant]
        self.table = np.vstack([self.table[keep], self.table[-1:]])
        self.table = np.delete(self.table, np.s_[k : k + self.num_rows], axis=1)
        self.basis = [self.basis[i] for i in keep]
        self.has_artificials = False
        if redundant:
            logger.debug("Removed %d redundant rows after phase 1", len(redundant))
        return redundant

    def run_phase_two(self, cost: FloatArray) -> PhaseResult:
        """Minimize ``cost^T w`` over structural columns (artificials dropped)."""
        if self.has_artificials:
            self.drop_artificials()
        self.set_objective(cost)
        allowed = np.ones(self.num_columns, dtype=bool)
        return self.run(allowed)

    def basic_solution(self) -> FloatArray:
        """Return the current basic solution over structural columns."""
        w = np.zeros(self.num_structural)
        for i, column in enumerate(self.basis):
            if column < self.num_structural:
                w[column] = self.table[i, -1]
        clipped: FloatArray = np.maximum(w, 0.0)
        return clipped

    def ray(self, entering: int) -> FloatArray:
        """Return the improving ray of an unbounded entering column."""
        w = np.zeros(self.num_structural)
        w[entering] = 1.0
        for i, column in enumerate(self.basis):
            if column < self.num_structural:
                w[column] -= self.table[i, entering]
        return w
