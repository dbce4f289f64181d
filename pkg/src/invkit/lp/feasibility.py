"""LP feasibility engine behind every polyhedral invariance condition.

Programs with equality rows, inequality rows and free or nonnegative
variables are rewritten in standard form (free variables split into
nonnegative pairs, one slack per inequality) and handed to the simplex
tableau. Infeasibility is always reported with a dual vector that can be
checked independently of the solver.
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from invkit.config import DEFAULT_LP_TOL, DEFAULT_PIVOT_TOL
from invkit.lp.models import (
    Alternative,
    FarkasOutcome,
    Feasible,
    FeasOutcome,
    Infeasible,
    LinearProgramFeas,
    LPShapeError,
    Optimum,
    OptimizeOutcome,
    Primal,
    Unbounded,
    VarSign,
)
from invkit.lp.simplex import SimplexTableau, StepStatus
from invkit.numerics import FloatArray

logger = logging.getLogger(__name__)


class _StandardForm:
    """Standard-form image ``M w = r, w >= 0`` of a program."""

    def __init__(self, program: LinearProgramFeas) -> None:
        n = program.num_vars
        plus: list[int] = []
        minus: list[int | None] = []
        column = 0
        for sign in program.signs:
            plus.append(column)
            column += 1
            if sign is VarSign.FREE:
                minus.append(column)
                column += 1
            else:
                minus.append(None)
        num_split = column
        k_eq = program.eq_matrix.shape[0]
        k_ineq = program.ineq_matrix.shape[0]

        matrix = np.zeros((k_eq + k_ineq, num_split + k_ineq))
        stacked = np.vstack([program.eq_matrix, program.ineq_matrix])
        for j in range(n):
            matrix[:, plus[j]] = stacked[:, j]
            neg = minus[j]
            if neg is not None:
                matrix[:, neg] = -stacked[:, j]
        matrix[k_eq:, num_split:] = np.eye(k_ineq)

        self.program = program
        self.plus = plus
        self.minus = minus
        self.matrix = matrix
        self.rhs = np.concatenate([program.eq_rhs, program.ineq_rhs])

    @property
    def num_columns(self) -> int:
        return int(self.matrix.shape[1])

    def to_original(self, w: FloatArray) -> FloatArray:
        x = np.array([w[p] for p in self.plus])
        for j, neg in enumerate(self.minus):
            if neg is not None:
                x[j] -= w[neg]
        return x

    def cost(self, objective: FloatArray) -> FloatArray:
        """Minimization cost of ``maximize objective^T x``."""
        c = np.zeros(self.num_columns)
        for j, p in enumerate(self.plus):
            c[p] = -objective[j]
            neg = self.minus[j]
            if neg is not None:
                c[neg] = objective[j]
        return c


def _phase_one(
    form: _StandardForm, lp_tol: float, pivot_tol: float
) -> tuple[SimplexTableau, Infeasible | None]:
    tableau = SimplexTableau(form.matrix, form.rhs, pivot_tol=pivot_tol)
    tableau.run_phase_one()
    residual = tableau.objective_value
    threshold = lp_tol * (1.0 + float(np.max(np.abs(form.rhs), initial=0.0)))
    if residual > threshold:
        dual = tableau.phase_one_dual()
        norm = float(np.max(np.abs(dual)))
        logger.debug("Infeasible program: phase-1 residual %.3e", residual)
        return tableau, Infeasible(dual=dual / norm if norm > 0.0 else dual)
    return tableau, None


def solve_feasibility(
    program: LinearProgramFeas,
    *,
    lp_tol: float = DEFAULT_LP_TOL,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> FeasOutcome:
    """Decide feasibility of ``E z = f, C z <= d`` with per-variable signs.

    Args:
        program: The program to decide.
        lp_tol: Phase-1 residual above which the program is infeasible.
        pivot_tol: Smallest admissible pivot.

    Returns:
        Feasible with a point, or Infeasible with a normalized dual vector.

    Raises:
        NumericalBreakdownError: If the simplex pivot budget is exhausted.

    Example:
        ```python
        program = LinearProgramFeas.build(2, eq_matrix=[[1.0, 1.0]], eq_rhs=[-1.0])
        solve_feasibility(program)  # Infeasible(dual=array([-1.]))
        ```
    """
    form = _StandardForm(program)
    tableau, infeasible = _phase_one(form, lp_tol, pivot_tol)
    if infeasible is not None:
        return infeasible
    point = form.to_original(tableau.basic_solution())
    violation = program.violation(point)
    if violation > lp_tol * (1.0 + float(np.max(np.abs(form.rhs), initial=0.0))):
        logger.warning("Feasible point violates constraints by %.3e", violation)
    return Feasible(point=point)


def certifies_infeasibility(
    program: LinearProgramFeas,
    dual: FloatArray,
    *,
    tol: float = DEFAULT_LP_TOL,
) -> bool:
    """Check a dual vector against the theorem of the alternative for the program."""
    matrix = np.vstack([program.eq_matrix, program.ineq_matrix])
    rhs = np.concatenate([program.eq_rhs, program.ineq_rhs])
    if dual.shape != rhs.shape:
        return False
    k_eq = program.eq_matrix.shape[0]
    if np.any(dual[k_eq:] > tol):
        return False
    products = matrix.T @ dual
    mask = program.nonnegative_mask
    if np.any(products[mask] > tol) or np.any(np.abs(products[~mask]) > tol):
        return False
    return float(rhs @ dual) > tol


def solve_farkas(
    p: ArrayLike,
    d: ArrayLike,
    *,
    lp_tol: float = DEFAULT_LP_TOL,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> FarkasOutcome:
    """Return exactly one Farkas branch for ``P z = d, z >= 0``.

    Returns:
        Primal(z) with P z = d and z >= 0, or Alternative(y) with
        P^T y <= 0 and d^T y > 0.
    """
    matrix = np.array(p, dtype=np.float64)
    if matrix.ndim != 2:
        raise LPShapeError(f"P must be 2-D, got shape {matrix.shape}")
    program = LinearProgramFeas.build(matrix.shape[1], eq_matrix=matrix, eq_rhs=d)
    outcome = solve_feasibility(program, lp_tol=lp_tol, pivot_tol=pivot_tol)
    if isinstance(outcome, Feasible):
        return Primal(z=outcome.point)
    return Alternative(y=outcome.dual)


def optimize(
    program: LinearProgramFeas,
    objective: ArrayLike,
    *,
    lp_tol: float = DEFAULT_LP_TOL,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> OptimizeOutcome:
    """Maximize ``objective^T z`` over the feasible set of a program.

    Returns:
        Optimum, Unbounded (feasible point plus improving ray) or Infeasible.

    Raises:
        NumericalBreakdownError: If the simplex pivot budget is exhausted.
    """
    c = np.array(objective, dtype=np.float64).reshape(-1)
    if c.shape[0] != program.num_vars:
        raise LPShapeError(f"objective has {c.shape[0]} entries, expected {program.num_vars}")
    form = _StandardForm(program)
    tableau, infeasible = _phase_one(form, lp_tol, pivot_tol)
    if infeasible is not None:
        return infeasible

    result = tableau.run_phase_two(form.cost(c))
    point = form.to_original(tableau.basic_solution())
    if result.status is StepStatus.UNBOUNDED and result.entering is not None:
        direction = form.to_original(tableau.ray(result.entering))
        return Unbounded(point=point, direction=direction)
    return Optimum(point=point, value=float(c @ point))


def maximize_linear(
    c: ArrayLike,
    g: ArrayLike,
    b: ArrayLike,
    *,
    lp_tol: float = DEFAULT_LP_TOL,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
) -> OptimizeOutcome:
    """Maximize ``c^T x`` over ``{x | G x <= b}`` with x free.

    Example:
        ```python
        diamond = [[1, 1], [-1, 1], [1, -1], [-1, -1]]
        maximize_linear([1, 0], diamond, [1, 1, 1, 1])  # Optimum at (1, 0), value 1
        ```
    """
    matrix = np.array(g, dtype=np.float64)
    if matrix.ndim != 2:
        raise LPShapeError(f"G must be 2-D, got shape {matrix.shape}")
    n = matrix.shape[1]
    program = LinearProgramFeas.build(
        n, ineq_matrix=matrix, ineq_rhs=b, free=range(n)
    )
    return optimize(program, c, lp_tol=lp_tol, pivot_tol=pivot_tol)
