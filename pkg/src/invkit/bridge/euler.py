"""Euler discretization and invariance-preserving steplength sweeps.

Forward Euler maps x' = A x to x_{k+1} = (I + dt A) x_k, backward Euler to
x_{k+1} = (I - dt A)^{-1} x_k. A sweep runs the matching discrete checker
at every grid steplength.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from invkit.bridge.models import DtSweepResult, DtVerdict, EulerMethod, EulerSpec
from invkit.conditions import check_problem
from invkit.config import DEFAULT_SINGULAR_TOL, DEFAULT_WITNESS_BUDGET
from invkit.numerics import FloatArray, SingularMatrixError, as_matrix, frobenius, invert
from invkit.problem import Problem, TimeRegime

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 32
DEFAULT_GRID_LO = 1e-4
DEFAULT_GRID_HI = 2.0


def discretize(
    a: ArrayLike,
    spec: EulerSpec,
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> FloatArray:
    """Return the Euler matrix of x' = A x at steplength spec.dt.

    Example:
        ```python
        discretize(-np.eye(2), EulerSpec(EulerMethod.FORWARD, 0.1))  # 0.9 * I
        ```

    Raises:
        SingularMatrixError: For backward Euler when 1/dt is an eigenvalue of A.
    """
    matrix = as_matrix(a, square=True, name="A")
    identity = np.eye(matrix.shape[0])
    if spec.method is EulerMethod.FORWARD:
        forward: FloatArray = identity + spec.dt * matrix
        return forward
    return invert(identity - spec.dt * matrix, singular_tol)


def default_dt_grid(a: ArrayLike, points: int = DEFAULT_GRID_POINTS) -> list[float]:
    """Return points log-spaced steplengths in [1e-4, 2] / ||A||_F.

    A zero matrix uses ||A||_F = 1.
    """
    if points < 1:
        raise ValueError(f"grid needs at least one point, got {points}")
    norm = frobenius(as_matrix(a, square=True, name="A")) or 1.0
    grid = np.geomspace(DEFAULT_GRID_LO, DEFAULT_GRID_HI, points) / norm
    return [float(dt) for dt in grid]


def _scalar_diagnostics(diagnostics: dict[str, Any]) -> dict[str, Any]:
    return {
        key: value
        for key, value in diagnostics.items()
        if isinstance(value, (int, float, str, bool)) or value is None
    }


def max_preserving_dt(
    problem: Problem,
    method: EulerMethod,
    dt_grid: list[float],
    *,
    max_workers: int = 1,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
) -> DtSweepResult:
    """Check the discretized system at every grid steplength.

    Args:
        problem: Continuous-time problem.
        method: Forward or backward Euler.
        dt_grid: Positive steplengths in ascending order.
        max_workers: Grid points evaluated concurrently.
        witness_budget: Passed through to the cone checkers.

    Returns:
        The per-dt verdict table; rows follow the grid order.

    Raises:
        ValueError: If the problem is discrete or the grid is empty, unsorted
            or not positive.
    """
    if not problem.is_continuous:
        raise ValueError("steplength sweeps need a continuous-time problem")
    if not dt_grid:
        raise ValueError("dt grid is empty")
    if any(later < earlier for earlier, later in zip(dt_grid, dt_grid[1:], strict=False)):
        raise ValueError("dt grid must be sorted ascending")
    specs = [EulerSpec(method, dt) for dt in dt_grid]

    def evaluate(spec: EulerSpec) -> DtVerdict:
        try:
            matrix = discretize(problem.a, spec, problem.tolerances.singular_tol)
        except SingularMatrixError:
            logger.debug("I - %.6g A is singular", spec.dt)
            return DtVerdict(dt=spec.dt, verdict=None, singular=True)
        report = check_problem(
            problem.with_matrix(matrix, TimeRegime.DISCRETE), witness_budget=witness_budget
        )
        return DtVerdict(
            dt=spec.dt,
            verdict=report.verdict,
            diagnostics=_scalar_diagnostics(report.diagnostics),
        )

    if max_workers <= 1:
        table = [evaluate(spec) for spec in specs]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            table = list(pool.map(evaluate, specs))

    result = DtSweepResult(method=method, table=tuple(table))
    logger.info(
        "%s Euler sweep over %d steplengths: largest passing dt %s",
        method,
        len(table),
        result.largest_passing_dt,
    )
    return result
