"""Invariance conditions for polyhedra and polyhedral cones.

Certificates are nonnegative (discrete) or off-diagonal nonnegative
(continuous) matrices. H-representation certificates are assembled row by
row and V-representation certificates column by column, each row or column
being an independent LP feasibility problem. Subproblems may be solved
concurrently; results are assembled by index, so the first infeasible index
does not depend on the worker count.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from invkit.conditions.models import (
    CheckReport,
    EscapeWitness,
    MatrixRole,
    NonnegMatrixCertificate,
    ODNonnegMatrixCertificate,
    Refutation,
    Verdict,
    VRepMatrixCertificate,
)
from invkit.conditions.verify import certified_report, refuted_report, system_matrix
from invkit.conditions.witness import discrete_escape, find_continuous_exit
from invkit.config import Tolerances
from invkit.lp import (
    Feasible,
    FeasOutcome,
    Infeasible,
    LinearProgramFeas,
    Optimum,
    Unbounded,
    maximize_linear,
    solve_feasibility,
)
from invkit.numerics import FloatArray
from invkit.problem import TimeRegime
from invkit.sets import HPolyhedron, VPolyhedron

logger = logging.getLogger(__name__)

MAX_RAY_DOUBLINGS = 40


def _solve_subproblems(
    build: Callable[[int], LinearProgramFeas],
    count: int,
    tolerances: Tolerances,
    max_workers: int,
) -> dict[int, FeasOutcome]:
    """Solve subproblems 0..count-1; sequential runs stop at the first infeasible one."""

    def solve(i: int) -> FeasOutcome:
        return solve_feasibility(build(i), lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol)

    if max_workers <= 1:
        outcomes: dict[int, FeasOutcome] = {}
        for i in range(count):
            outcomes[i] = solve(i)
            if isinstance(outcomes[i], Infeasible):
                break
        return outcomes
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return dict(enumerate(pool.map(solve, range(count))))


def _first_infeasible(outcomes: dict[int, FeasOutcome]) -> int | None:
    return min((i for i, o in outcomes.items() if isinstance(o, Infeasible)), default=None)


def _assemble(outcomes: dict[int, FeasOutcome], count: int) -> FloatArray:
    vectors = []
    for i in range(count):
        outcome = outcomes[i]
        assert isinstance(outcome, Feasible)
        vectors.append(outcome.point)
    return np.array(vectors)


def _ray_point(base: FloatArray, direction: FloatArray, c: FloatArray, target: float) -> FloatArray:
    """Point base + t * direction with c^T x >= target, t >= 0."""
    rate = float(c @ direction)
    if rate <= 0.0:
        return base
    t = max(0.0, (target - float(c @ base)) / rate)
    point: FloatArray = base + t * direction
    return point


def _facet_maximum(
    c: FloatArray, p: HPolyhedron, i: int, tolerances: Tolerances
) -> FloatArray | None:
    """Point of facet i maximizing c^T x (or with c^T x >= 1 when unbounded)."""
    g = np.vstack([p.g, -p.g[i]])
    b = np.append(p.b, -p.b[i])
    outcome = maximize_linear(c, g, b, lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol)
    match outcome:
        case Optimum(point=x):
            return x
        case Unbounded(point=base, direction=d):
            return _ray_point(base, d, c, 1.0)
    return None


# ---------------------------------------------------------------------------
# Discrete time
# ---------------------------------------------------------------------------


def check_discrete_polyhedron(
    a: ArrayLike,
    p: HPolyhedron,
    tolerances: Tolerances | None = None,
    *,
    max_workers: int = 1,
) -> CheckReport:
    """Decide invariance of ``{x | G x <= b}`` under x_{k+1} = A x_k.

    Row i of the certificate H solves ``h >= 0, G^T h = (GA)_i^T,
    b^T h <= b_i``. When row i is infeasible, maximizing (GA)_i x over P
    yields a member x whose image violates row i.

    Args:
        a: System matrix (n x n).
        p: Valid H-polyhedron or H-cone.
        tolerances: Numeric thresholds; defaults when omitted.
        max_workers: Thread count for the row subproblems.

    Returns:
        Invariant with NonnegMatrix(H), or NotInvariant with the first
        infeasible row and an escape witness.

    Raises:
        DimensionMismatchError: If A and P disagree in dimension.
        LPError: If the simplex breaks down.

    Example:
        ```python
        diamond = HPolyhedron(g=[[1, 1], [-1, 1], [1, -1], [-1, -1]], b=[1, 1, 1, 1])
        check_discrete_polyhedron(-np.eye(2), diamond).verdict  # Invariant
        ```
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, p)
    m = p.num_facets
    ga = p.g @ matrix
    checker = "check_discrete_polyhedron"

    def build(i: int) -> LinearProgramFeas:
        return LinearProgramFeas.build(
            m,
            eq_matrix=p.g.T,
            eq_rhs=ga[i],
            ineq_matrix=p.b.reshape(1, -1),
            ineq_rhs=[p.b[i]],
        )

    outcomes = _solve_subproblems(build, m, tolerances, max_workers)
    failed = _first_infeasible(outcomes)
    diagnostics: dict[str, Any] = {"subproblems": len(outcomes), "rows": m}
    if failed is None:
        certificate = NonnegMatrixCertificate(h=np.maximum(_assemble(outcomes, m), 0.0))
        return certified_report(
            matrix, p, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    outcome = outcomes[failed]
    assert isinstance(outcome, Infeasible)
    trace: dict[str, Any] = {"row": failed, "dual": outcome.dual.tolist()}
    witness = None
    match maximize_linear(
        ga[failed], p.g, p.b, lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol
    ):
        case Optimum(point=x, value=value):
            trace["row_maximum"] = value
            witness = discrete_escape(matrix, p, x, tolerances)
        case Unbounded(point=base, direction=d):
            trace["row_maximum"] = None
            target = p.b[failed] + 1.0 + abs(p.b[failed])
            far = _ray_point(base, d, ga[failed], target)
            witness = discrete_escape(matrix, p, far, tolerances)
    refutation = Refutation(
        failed_conditions=(f"row {failed}: no h >= 0 with G^T h = (GA)_i, b^T h <= b_i",),
        failed_index=failed,
        witness=witness,
        trace=trace,
    )
    verdict = Verdict.NOT_INVARIANT
    if witness is None:
        logger.warning("%s: row %d infeasible but no escaping member found", checker, failed)
        verdict = Verdict.INCONCLUSIVE
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics,
        started=started, verdict=verdict,
    )


def _vertex_weights(p: VPolyhedron) -> FloatArray:
    return np.concatenate([np.ones(p.num_vertices), np.zeros(p.num_rays)])


def _generator(p: VPolyhedron, j: int) -> FloatArray:
    """Member of P associated with generator j (the vertex, the ray, or x^1 + ray)."""
    if j < p.num_vertices:
        return p.vertices[j].copy()
    ray = p.rays[j - p.num_vertices]
    if p.is_cone:
        return ray.copy()
    start: FloatArray = p.vertices[0] + ray
    return start


def _discrete_v_escape(
    a: FloatArray, p: VPolyhedron, j: int, tolerances: Tolerances
) -> EscapeWitness | None:
    if j < p.num_vertices or p.is_cone:
        return discrete_escape(a, p, _generator(p, j), tolerances)
    ray = p.rays[j - p.num_vertices]
    t = 1.0
    for _ in range(MAX_RAY_DOUBLINGS):
        witness = discrete_escape(a, p, p.vertices[0] + t * ray, tolerances)
        if witness is not None:
            return witness
        t *= 2.0
    return None


def check_discrete_v_polyhedron(
    a: ArrayLike,
    p: VPolyhedron,
    tolerances: Tolerances | None = None,
    *,
    max_workers: int = 1,
) -> CheckReport:
    """Decide invariance of a V-polyhedron under x_{k+1} = A x_k.

    Column j of L expresses the image of generator j: a vertex image as a
    convex combination of vertices plus a conic combination of rays (vertex
    weights sum to 1), a ray image as a conic combination of rays (vertex
    weights sum to 0).

    Returns:
        Invariant with VRepMatrix(L), or NotInvariant with the failing
        generator index and its escaping image.

    Raises:
        DimensionMismatchError: If A and P disagree in dimension.
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, p)
    k = p.num_vertices + p.num_rays
    ax = matrix @ p.generators
    checker = "check_discrete_v_polyhedron"

    def build(j: int) -> LinearProgramFeas:
        eq = p.generators
        rhs = ax[:, j]
        if not p.is_cone:
            eq = np.vstack([eq, _vertex_weights(p)])
            rhs = np.append(rhs, 1.0 if j < p.num_vertices else 0.0)
        return LinearProgramFeas.build(k, eq_matrix=eq, eq_rhs=rhs)

    outcomes = _solve_subproblems(build, k, tolerances, max_workers)
    failed = _first_infeasible(outcomes)
    diagnostics: dict[str, Any] = {"subproblems": len(outcomes), "generators": k}
    if failed is None:
        certificate = VRepMatrixCertificate(l=np.maximum(_assemble(outcomes, k).T, 0.0))
        return certified_report(
            matrix, p, TimeRegime.DISCRETE, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    witness = _discrete_v_escape(matrix, p, failed, tolerances)
    kind = "vertex" if failed < p.num_vertices else "ray"
    refutation = Refutation(
        failed_conditions=(f"{kind} generator {failed}: image not representable",),
        failed_index=failed,
        witness=witness,
        trace={"generator": failed, "image": ax[:, failed].tolist()},
    )
    verdict = Verdict.NOT_INVARIANT
    if witness is None:
        logger.warning("%s: generator %d infeasible but no escaping member found", checker, failed)
        verdict = Verdict.INCONCLUSIVE
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics,
        started=started, verdict=verdict,
    )


# ---------------------------------------------------------------------------
# Continuous time
# ---------------------------------------------------------------------------


def check_continuous_polyhedron(
    a: ArrayLike,
    p: HPolyhedron,
    tolerances: Tolerances | None = None,
    *,
    max_workers: int = 1,
) -> CheckReport:
    """Decide invariance of ``{x | G x <= b}`` under x' = A x.

    Row i of the certificate H~ solves ``G^T h = (GA)_i^T, b^T h <= 0`` with
    h_j >= 0 for j != i and h_i free. A failing row is refuted on its facet:
    the facet point maximizing G_i A x has outward flow, and the exit scan
    turns it into a replayable witness.

    Returns:
        Invariant with ODNonnegMatrix(H~), or NotInvariant with the first
        infeasible row, the outward rate and an escape witness. A row that
        fails without an escaping trajectory gives Inconclusive.

    Example:
        ```python
        diamond = HPolyhedron(g=[[1, 1], [-1, 1], [1, -1], [-1, -1]], b=[1, 1, 1, 1])
        report = check_continuous_polyhedron(-np.eye(2), diamond)
        report.certificate.matrix  # off-diagonal nonnegative, e.g. -I_4
        ```
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, p)
    m = p.num_facets
    ga = p.g @ matrix
    checker = "check_continuous_polyhedron"

    def build(i: int) -> LinearProgramFeas:
        return LinearProgramFeas.build(
            m,
            eq_matrix=p.g.T,
            eq_rhs=ga[i],
            ineq_matrix=p.b.reshape(1, -1),
            ineq_rhs=[0.0],
            free=[i],
        )

    outcomes = _solve_subproblems(build, m, tolerances, max_workers)
    failed = _first_infeasible(outcomes)
    diagnostics: dict[str, Any] = {"subproblems": len(outcomes), "rows": m}
    if failed is None:
        h = _assemble(outcomes, m)
        off = ~np.eye(m, dtype=bool)
        h[off] = np.maximum(h[off], 0.0)
        certificate = ODNonnegMatrixCertificate(matrix=h, role=MatrixRole.H)
        return certified_report(
            matrix, p, TimeRegime.CONTINUOUS, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    outcome = outcomes[failed]
    assert isinstance(outcome, Infeasible)
    trace: dict[str, Any] = {"row": failed, "dual": outcome.dual.tolist()}
    witness = None
    point = _facet_maximum(ga[failed], p, failed, tolerances)
    if point is not None:
        rate = float(ga[failed] @ point) / float(p.row_norms[failed])
        trace["boundary_point"] = point.tolist()
        trace["outward_rate"] = rate
        if rate > tolerances.membership_tol * (1.0 + float(np.linalg.norm(point))):
            witness = find_continuous_exit(matrix, p, point, tolerances)
    verdict = Verdict.NOT_INVARIANT
    if witness is None:
        logger.warning("%s: row %d infeasible but no escaping trajectory found", checker, failed)
        verdict = Verdict.INCONCLUSIVE
    refutation = Refutation(
        failed_conditions=(f"row {failed}: G_i^T A x > 0 on the facet",),
        failed_index=failed,
        witness=witness,
        trace=trace,
    )
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics,
        started=started, verdict=verdict,
    )


def check_continuous_v_polyhedron(
    a: ArrayLike,
    p: VPolyhedron,
    tolerances: Tolerances | None = None,
    *,
    max_workers: int = 1,
) -> CheckReport:
    """Decide invariance of a V-polyhedron under x' = A x.

    Column j of L~ expresses A x_j in the generators with every weight but
    the j-th nonnegative and the vertex weights summing to 0.

    Returns:
        Invariant with ODNonnegMatrix(L~), or NotInvariant with the failing
        generator index and the escape witness of the exit scan from that
        generator. Inconclusive when the scan finds no exit.
    """
    started = time.monotonic()
    tolerances = tolerances or Tolerances()
    matrix = system_matrix(a, p)
    k = p.num_vertices + p.num_rays
    ax = matrix @ p.generators
    checker = "check_continuous_v_polyhedron"

    def build(j: int) -> LinearProgramFeas:
        eq = p.generators
        rhs = ax[:, j]
        if not p.is_cone:
            eq = np.vstack([eq, _vertex_weights(p)])
            rhs = np.append(rhs, 0.0)
        return LinearProgramFeas.build(k, eq_matrix=eq, eq_rhs=rhs, free=[j])

    outcomes = _solve_subproblems(build, k, tolerances, max_workers)
    failed = _first_infeasible(outcomes)
    diagnostics: dict[str, Any] = {"subproblems": len(outcomes), "generators": k}
    if failed is None:
        l_tilde = _assemble(outcomes, k).T
        off = ~np.eye(k, dtype=bool)
        l_tilde[off] = np.maximum(l_tilde[off], 0.0)
        certificate = ODNonnegMatrixCertificate(matrix=l_tilde, role=MatrixRole.L)
        return certified_report(
            matrix, p, TimeRegime.CONTINUOUS, certificate,
            checker=checker, tolerances=tolerances, diagnostics=diagnostics, started=started,
        )

    start = _generator(p, failed)
    witness = find_continuous_exit(matrix, p, start, tolerances)
    kind = "vertex" if failed < p.num_vertices else "ray"
    refutation = Refutation(
        failed_conditions=(f"{kind} generator {failed}: A x_j leaves the tangent cone",),
        failed_index=failed,
        witness=witness,
        trace={"generator": failed, "image": ax[:, failed].tolist()},
    )
    verdict = Verdict.NOT_INVARIANT
    if witness is None:
        logger.warning(
            "%s: generator %d infeasible but no escaping trajectory found", checker, failed
        )
        verdict = Verdict.INCONCLUSIVE
    return refuted_report(
        refutation, checker=checker, tolerances=tolerances, diagnostics=diagnostics,
        started=started, verdict=verdict,
    )
