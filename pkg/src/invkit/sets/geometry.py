"""Validation, membership and tangent-cone queries for set descriptions.

Polyhedra and cones compare slacks against ``membership_tol * (1 + ||x||)``
so that classifications do not depend on how far from the origin a point
is; ellipsoids and quadratic sets compare against ``membership_tol``
directly. V-representation queries are LP feasibility questions and are
delegated to the LP engine.
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from invkit.config import Tolerances
from invkit.lp import (
    Alternative,
    Infeasible,
    LinearProgramFeas,
    Optimum,
    Primal,
    optimize,
    solve_farkas,
)
from invkit.numerics import (
    FloatArray,
    NumericsError,
    inertia,
    max_abs,
    scale_of,
)
from invkit.sets.models import (
    DimensionMismatchError,
    DoubleCone,
    Ellipsoid,
    HPolyhedron,
    LorenzCone,
    Membership,
    MembershipClass,
    NotOnBoundaryError,
    QuadraticSet,
    SetDescription,
    ValidationReport,
    VPolyhedron,
)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = Tolerances()


def _point(s: SetDescription, x: ArrayLike, name: str = "x") -> FloatArray:
    arr = np.array(x, dtype=np.float64).reshape(-1)
    if arr.shape[0] != s.dim:
        raise DimensionMismatchError(f"{name} has dimension {arr.shape[0]}, set has {s.dim}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatchError(f"{name} has non-finite entries")
    return arr


def _quadric_violations(q: FloatArray, tolerances: Tolerances) -> tuple[list[str], str | None]:
    violations: list[str] = []
    asym = max_abs(q - q.T)
    if asym > tolerances.eig_tol * scale_of(q):
        violations.append(f"Q is not symmetric (||Q - Q^T||_max = {asym:.3e})")
        return violations, None
    try:
        found = inertia(q, tolerances.inertia_tol, eig_tol=tolerances.eig_tol)
    except NumericsError as e:
        violations.append(f"eigen-decomposition failed: {e}")
        return violations, None
    return violations, str(found)


def validate(s: SetDescription, tolerances: Tolerances = DEFAULT_TOLERANCES) -> ValidationReport:
    """Check a set description against its definition.

    Returns:
        A report listing every violated side condition; never raises for
        invalid input.
    """
    violations: list[str] = []
    details: dict[str, object] = {"type": str(s.kind), "dim": s.dim}

    match s:
        case HPolyhedron():
            zero_rows = np.flatnonzero(s.row_norms <= tolerances.eig_tol)
            if zero_rows.size:
                violations.append(f"G has all-zero rows {zero_rows.tolist()}")
            elif isinstance(
                optimize(
                    LinearProgramFeas.build(
                        s.dim, ineq_matrix=s.g, ineq_rhs=s.b, free=range(s.dim)
                    ),
                    np.zeros(s.dim),
                    lp_tol=tolerances.lp_tol,
                    pivot_tol=tolerances.pivot_tol,
                ),
                Infeasible,
            ):
                violations.append("polyhedron is empty")
        case VPolyhedron():
            norms = np.linalg.norm(s.rays, axis=1)
            zero_rays = np.flatnonzero(norms <= tolerances.eig_tol)
            if zero_rays.size:
                violations.append(f"rays {zero_rays.tolist()} are zero")
            details["full_dimensional"] = is_full_dimensional(s, tolerances)
        case Ellipsoid():
            found_violations, found = _quadric_violations(s.q, tolerances)
            violations += found_violations
            if found is not None:
                details["inertia"] = found
                if found != f"({s.dim},0,0)":
                    violations.append(f"Q must be positive definite, inertia is {found}")
        case QuadraticSet():
            found_violations, found = _quadric_violations(s.q, tolerances)
            violations += found_violations
            if found is not None:
                details["inertia"] = found
        case LorenzCone() | DoubleCone():
            found_violations, found = _quadric_violations(s.q, tolerances)
            violations += found_violations
            if found is not None:
                details["inertia"] = found
                if s.standard is None:
                    violations.append(f"inertia {found} differs from ({s.dim - 1},0,1)")
                else:
                    details["lambda_n"] = s.standard.lambda_n
                    details["u_n"] = s.standard.u_n.tolist()

    if violations:
        logger.debug("Set %s failed validation: %s", s.kind, "; ".join(violations))
    return ValidationReport(valid=not violations, violations=tuple(violations), details=details)


def is_full_dimensional(p: VPolyhedron, tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Return True when the generators span an n-dimensional set."""
    directions = [p.rays]
    if p.num_vertices > 1:
        directions.append(p.vertices[1:] - p.vertices[0])
    d = np.vstack(directions)
    if d.shape[0] < p.dim:
        return False
    gram = d.T @ d
    return inertia(gram, tolerances.inertia_tol, eig_tol=tolerances.eig_tol).positive == p.dim


def _v_membership(p: VPolyhedron, x: FloatArray, tol: float, tolerances: Tolerances) -> Membership:
    band = tol * (1.0 + float(np.linalg.norm(x)))
    matrix = p.generators
    rhs = x
    if not p.is_cone:
        weights_row = np.concatenate([np.ones(p.num_vertices), np.zeros(p.num_rays)])
        matrix = np.vstack([matrix, weights_row])
        rhs = np.concatenate([x, [1.0]])
    branch = solve_farkas(matrix, rhs, lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol)
    if isinstance(branch, Alternative):
        w = branch.y[: p.dim]
        offset = float(branch.y[p.dim]) if not p.is_cone else 0.0
        norm = float(np.linalg.norm(w))
        slack = (float(x @ w) + offset) / norm if norm > 0.0 else float("inf")
        if slack > band:
            return Membership(MembershipClass.OUTSIDE, slack)
        return Membership(MembershipClass.BOUNDARY, slack)

    if not is_full_dimensional(p, tolerances):
        return Membership(MembershipClass.BOUNDARY, 0.0)

    # maximize s subject to every weight >= s, s <= 1
    k = p.num_vertices + p.num_rays
    eq = np.hstack([matrix, np.zeros((matrix.shape[0], 1))])
    ineq = np.hstack([-np.eye(k), np.ones((k, 1))])
    cap = np.zeros((1, k + 1))
    cap[0, -1] = 1.0
    program = LinearProgramFeas.build(
        k + 1,
        eq_matrix=eq,
        eq_rhs=rhs,
        ineq_matrix=np.vstack([ineq, cap]),
        ineq_rhs=np.concatenate([np.zeros(k), [1.0]]),
        free=[k],
    )
    outcome = optimize(
        program, np.eye(k + 1)[-1], lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol
    )
    if isinstance(outcome, Optimum) and outcome.value > tol:
        return Membership(MembershipClass.INSIDE, -outcome.value)
    return Membership(MembershipClass.BOUNDARY, 0.0)


def membership(
    s: SetDescription,
    x: ArrayLike,
    membership_tol: float | None = None,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Membership:
    """Classify a point as Inside, Boundary or Outside.

    Args:
        s: Set description.
        x: Point of matching dimension.
        membership_tol: Band width; defaults to tolerances.membership_tol.
        tolerances: Remaining tolerances (LP for V-representations).

    Returns:
        The classification with its signed slack.

    Raises:
        DimensionMismatchError: If x does not match the set dimension.
    """
    point = _point(s, x)
    tol = tolerances.membership_tol if membership_tol is None else membership_tol
    relative = tol * (1.0 + float(np.linalg.norm(point)))

    match s:
        case HPolyhedron():
            slack = float(np.max((s.g @ point - s.b) / s.row_norms))
            return Membership.from_slack(slack, relative)
        case VPolyhedron():
            return _v_membership(s, point, tol, tolerances)
        case Ellipsoid():
            value = float(point @ s.q @ point)
            return Membership.from_slack(float(np.sqrt(max(value, 0.0))) - 1.0, tol)
        case QuadraticSet():
            value = float(point @ s.q @ point)
            return Membership.from_slack((value - 1.0) / (1.0 + abs(value)), tol)
        case LorenzCone() | DoubleCone():
            z = s.require_standard().inverse @ point
            radial = float(np.linalg.norm(z[:-1]))
            height = float(z[-1]) if isinstance(s, LorenzCone) else abs(float(z[-1]))
            band = tol * (1.0 + float(np.linalg.norm(z)))
            return Membership.from_slack(radial - height, band)
    raise TypeError(f"unsupported set description {type(s).__name__}")


def _v_tangent_margin(
    p: VPolyhedron, x: FloatArray, v: FloatArray, tolerances: Tolerances
) -> float:
    columns = [p.vertices.T, p.rays.T, -x.reshape(-1, 1)]
    matrix = np.hstack(columns)
    rhs = v
    if not p.is_cone:
        weights = np.concatenate([np.ones(p.num_vertices), np.zeros(p.num_rays), [-1.0]])
        matrix = np.vstack([matrix, weights])
        rhs = np.concatenate([v, [0.0]])
    branch = solve_farkas(matrix, rhs, lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol)
    if isinstance(branch, Primal):
        return 0.0
    w = branch.y[: p.dim]
    norm = float(np.linalg.norm(w))
    return float(rhs @ branch.y) / norm if norm > 0.0 else float("inf")


def tangent_cone_margin(
    s: SetDescription,
    x: ArrayLike,
    v: ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Return the signed violation of v lying in the tangent cone at x.

    Values at or below the tolerance mean v is tangent or inward; positive
    values measure outward components (``G_i^T v`` over active rows for
    polyhedra, ``v^T Q x`` for quadrics).

    Raises:
        DimensionMismatchError: If x or v do not match the set dimension.
        NotOnBoundaryError: If x does not classify as Boundary.
    """
    point = _point(s, x)
    direction = _point(s, v, "v")
    position = membership(s, point, tolerances=tolerances)
    if not position.is_boundary:
        raise NotOnBoundaryError(
            f"x classifies {position.classification} (slack {position.slack:.3e})"
        )
    tol = tolerances.membership_tol

    match s:
        case HPolyhedron():
            slacks = (s.g @ point - s.b) / s.row_norms
            active = np.abs(slacks) <= tol * (1.0 + float(np.linalg.norm(point)))
            if not np.any(active):
                active = slacks >= float(np.max(slacks)) - tol
            return float(np.max((s.g[active] @ direction) / s.row_norms[active]))
        case VPolyhedron():
            return _v_tangent_margin(s, point, direction, tolerances)
        case Ellipsoid() | QuadraticSet():
            return float(direction @ s.q @ point)
        case LorenzCone() | DoubleCone():
            if float(np.linalg.norm(point)) <= tol:
                return max(membership(s, direction, tolerances=tolerances).slack, 0.0)
            return float(direction @ s.q @ point)
    raise TypeError(f"unsupported set description {type(s).__name__}")


def tangent_cone_contains(
    s: SetDescription,
    x: ArrayLike,
    v: ArrayLike,
    tol: float | None = None,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> bool:
    """Return True when v lies in the tangent cone of s at the boundary point x.

    Raises:
        NotOnBoundaryError: If x does not classify as Boundary.
    """
    limit = tolerances.membership_tol if tol is None else tol
    return tangent_cone_margin(s, x, v, tolerances=tolerances) <= limit

