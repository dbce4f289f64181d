"""Route a Problem to the checker for its set type and time regime."""

from __future__ import annotations

import logging

from invkit.conditions.cone import (
    check_continuous_double_cone,
    check_continuous_lorenz,
    check_discrete_double_cone,
    check_discrete_lorenz,
)
from invkit.conditions.ellipsoid import (
    check_continuous_ellipsoid,
    check_discrete_ellipsoid,
    check_discrete_quadratic,
)
from invkit.conditions.models import CheckReport
from invkit.conditions.polyhedral import (
    check_continuous_polyhedron,
    check_continuous_v_polyhedron,
    check_discrete_polyhedron,
    check_discrete_v_polyhedron,
)
from invkit.config import DEFAULT_WITNESS_BUDGET
from invkit.problem import Problem, TimeRegime
from invkit.sets import (
    DoubleCone,
    Ellipsoid,
    HPolyhedron,
    LorenzCone,
    QuadraticSet,
    SetError,
    VPolyhedron,
    validate,
)

logger = logging.getLogger(__name__)


class UnsupportedProblemError(Exception):
    """Raised when no checker exists for a (set type, time regime) pair."""


def check_problem(
    problem: Problem,
    *,
    max_workers: int = 1,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
) -> CheckReport:
    """Run the checker matching the problem's set and time regime.

    Args:
        problem: Validated problem.
        max_workers: Worker threads for polyhedral LP subproblems.
        witness_budget: Samples spent on best-effort cone witnesses.

    Returns:
        The checker's report.

    Raises:
        SetError: If the set fails validation.
        UnsupportedProblemError: For continuous-time indefinite quadratic sets.
    """
    report = validate(problem.region, problem.tolerances)
    if not report.valid:
        raise SetError(f"invalid {problem.region.kind}: {'; '.join(report.violations)}")

    a, tol, seed = problem.a, problem.tolerances, problem.seed
    discrete = problem.time is TimeRegime.DISCRETE
    logger.info(
        "Checking %s under %s dynamics (n=%d)", problem.region.kind, problem.time, problem.dim
    )

    match problem.region:
        case HPolyhedron() as p if discrete:
            return check_discrete_polyhedron(a, p, tol, max_workers=max_workers)
        case HPolyhedron() as p:
            return check_continuous_polyhedron(a, p, tol, max_workers=max_workers)
        case VPolyhedron() as p if discrete:
            return check_discrete_v_polyhedron(a, p, tol, max_workers=max_workers)
        case VPolyhedron() as p:
            return check_continuous_v_polyhedron(a, p, tol, max_workers=max_workers)
        case Ellipsoid() as e if discrete:
            return check_discrete_ellipsoid(a, e, tol)
        case Ellipsoid() as e:
            return check_continuous_ellipsoid(a, e, tol)
        case QuadraticSet() as s if discrete:
            return check_discrete_quadratic(a, s, tol, witness_budget=witness_budget, seed=seed)
        case LorenzCone() as c if discrete:
            return check_discrete_lorenz(a, c, tol, witness_budget=witness_budget, seed=seed)
        case LorenzCone() as c:
            return check_continuous_lorenz(a, c, tol, witness_budget=witness_budget, seed=seed)
        case DoubleCone() as d if discrete:
            return check_discrete_double_cone(a, d, tol, witness_budget=witness_budget, seed=seed)
        case DoubleCone() as d:
            return check_continuous_double_cone(
                a, d, tol, witness_budget=witness_budget, seed=seed
            )
    raise UnsupportedProblemError(f"no {problem.time} condition for {problem.region.kind}")
