"""Seeded boundary and member sampling for set descriptions.

Sampling uses ``numpy.random.default_rng(seed)`` so that every result is
reproducible for a fixed seed. Boundary points are constructed so they
classify Boundary under :func:`invkit.sets.geometry.membership`.
"""

from __future__ import annotations

import logging

import numpy as np

from invkit.config import Tolerances
from invkit.lp import LinearProgramFeas, Optimum, optimize
from invkit.numerics import FloatArray, sym_eig
from invkit.sets.geometry import DEFAULT_TOLERANCES, is_full_dimensional
from invkit.sets.models import (
    DegenerateSetError,
    DoubleCone,
    Ellipsoid,
    HPolyhedron,
    LorenzCone,
    QuadraticSet,
    SetDescription,
    VPolyhedron,
)

logger = logging.getLogger(__name__)

FACET_STEP_FRACTION = 0.9  # in-facet steps stay within this share of the distance to other facets
UNBOUNDED_FACET_RADIUS = 1.0
MAX_REJECTIONS = 1000
RAY_SHOTS = 20


def _facet_centre(p: HPolyhedron, i: int, tolerances: Tolerances) -> FloatArray | None:
    """Point of facet i farthest from the other facets, or None when degenerate."""
    n = p.dim
    others = [j for j in range(p.num_facets) if j != i]
    norms = p.row_norms
    ineq = [np.concatenate([p.g[j], [norms[j]]]) for j in others]
    ineq.append(np.concatenate([np.zeros(n), [1.0]]))
    rhs = [p.b[j] for j in others] + [1.0]
    program = LinearProgramFeas.build(
        n + 1,
        eq_matrix=np.concatenate([p.g[i], [0.0]]).reshape(1, -1),
        eq_rhs=[p.b[i]],
        ineq_matrix=np.array(ineq),
        ineq_rhs=np.array(rhs),
        free=range(n + 1),
    )
    objective = np.zeros(n + 1)
    objective[-1] = 1.0
    outcome = optimize(
        program, objective, lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol
    )
    if not isinstance(outcome, Optimum) or outcome.value <= tolerances.membership_tol:
        return None
    centre: FloatArray = outcome.point[:n]
    return centre


def _facet_point(
    p: HPolyhedron, i: int, centre: FloatArray, rng: np.random.Generator
) -> FloatArray:
    normal = p.g[i] / p.row_norms[i]
    d = rng.standard_normal(p.dim)
    d -= (d @ normal) * normal
    length = float(np.linalg.norm(d))
    if length <= 1e-12:
        return centre.copy()
    d /= length
    rates = p.g @ d
    rates[i] = 0.0
    slack = p.b - p.g @ centre
    limits = [slack[j] / rates[j] for j in range(p.num_facets) if rates[j] > 1e-12]
    if limits:
        reach = min(limits)
    else:
        reach = UNBOUNDED_FACET_RADIUS * (1.0 + float(np.linalg.norm(centre)))
    point: FloatArray = centre + rng.uniform(0.0, FACET_STEP_FRACTION) * reach * d
    return point


def _sample_h_boundary(
    p: HPolyhedron, count: int, rng: np.random.Generator, tolerances: Tolerances
) -> list[FloatArray]:
    centres: list[tuple[int, FloatArray]] = []
    for i in range(p.num_facets):
        centre = _facet_centre(p, i, tolerances)
        if centre is None:
            logger.warning("Facet %d has no relative-interior point; skipped", i)
        else:
            centres.append((i, centre))
    if not centres:
        raise DegenerateSetError("no facet of the polyhedron has a relative-interior point")
    return [
        _facet_point(p, *centres[k % len(centres)], rng) for k in range(count)
    ]


def _v_combination(p: VPolyhedron, rng: np.random.Generator) -> FloatArray:
    point = np.zeros(p.dim)
    if p.num_vertices:
        point += rng.dirichlet(np.ones(p.num_vertices)) @ p.vertices
    if p.num_rays:
        point += rng.exponential(1.0, p.num_rays) @ p.rays
    return point


def _shoot(
    p: VPolyhedron, origin: FloatArray, d: FloatArray, tolerances: Tolerances
) -> float | None:
    """Largest t with origin + t d in P (None when the ray stays inside)."""
    k = p.num_vertices + p.num_rays
    eq = np.hstack([p.generators, -d.reshape(-1, 1)])
    rhs = origin
    if not p.is_cone:
        weights = np.concatenate([np.ones(p.num_vertices), np.zeros(p.num_rays), [0.0]])
        eq = np.vstack([eq, weights])
        rhs = np.concatenate([origin, [1.0]])
    program = LinearProgramFeas.build(k + 1, eq_matrix=eq, eq_rhs=rhs)
    objective = np.zeros(k + 1)
    objective[-1] = 1.0
    outcome = optimize(
        program, objective, lp_tol=tolerances.lp_tol, pivot_tol=tolerances.pivot_tol
    )
    return outcome.value if isinstance(outcome, Optimum) else None


def _sample_v_boundary(
    p: VPolyhedron, count: int, rng: np.random.Generator, tolerances: Tolerances
) -> list[FloatArray]:
    full = is_full_dimensional(p, tolerances)
    points: list[FloatArray] = []
    for _ in range(count):
        origin = _v_combination(p, rng)
        if not full:
            points.append(origin)
            continue
        for _ in range(RAY_SHOTS):
            d = rng.standard_normal(p.dim)
            reach = _shoot(p, origin, d, tolerances)
            if reach is not None:
                points.append(origin + reach * d)
                break
        else:
            logger.warning("No boundary hit after %d ray shots", RAY_SHOTS)
    if not points:
        raise DegenerateSetError("ray shooting found no boundary point")
    return points


def _positive_directions(q: FloatArray) -> bool:
    return sym_eig(q).lambda_max > 0.0


def sample_boundary(
    s: SetDescription,
    count: int,
    seed: int = 0,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> FloatArray:
    """Draw boundary points of a set.

    Args:
        s: Valid set description.
        count: Number of points requested (at least 1).
        seed: Generator seed.
        tolerances: LP and membership tolerances.

    Returns:
        Array of shape (k, n), one point per row. k equals count except when
        degenerate facets or failed ray shots were skipped.

    Raises:
        DegenerateSetError: If the set has no boundary point to offer.

    Example:
        ```python
        points = sample_boundary(Ellipsoid(np.eye(2)), 4, seed=0)
        np.sum(points**2, axis=1)  # all 1
        ```
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = np.random.default_rng(seed)
    n = s.dim
    points: list[FloatArray]

    match s:
        case HPolyhedron():
            points = _sample_h_boundary(s, count, rng, tolerances)
        case VPolyhedron():
            points = _sample_v_boundary(s, count, rng, tolerances)
        case Ellipsoid():
            points = []
            for _ in range(count):
                z = rng.standard_normal(n)
                points.append(z / np.sqrt(z @ s.q @ z))
        case QuadraticSet():
            if not _positive_directions(s.q):
                raise DegenerateSetError("Q has no positive eigenvalue; the set is all of R^n")
            points = []
            for _ in range(MAX_REJECTIONS * count):
                z = rng.standard_normal(n)
                value = float(z @ s.q @ z)
                if value > 1e-12:
                    points.append(z / np.sqrt(value))
                    if len(points) == count:
                        break
            if not points:
                raise DegenerateSetError("no direction with z^T Q z > 0 was drawn")
        case LorenzCone() | DoubleCone():
            transform = s.require_standard().transform
            points = []
            for k in range(count):
                w = rng.standard_normal(n - 1)
                x = transform @ np.concatenate([w, [np.linalg.norm(w)]])
                flip = isinstance(s, DoubleCone) and k % 2 == 1
                points.append(-x if flip else x)
        case _:
            raise TypeError(f"unsupported set description {type(s).__name__}")
    return np.array(points)


def sample_members(
    s: SetDescription,
    count: int,
    seed: int = 0,
    *,
    boundary_fraction: float = 0.75,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> FloatArray:
    """Draw members of a set, boundary points first.

    The first ``ceil(boundary_fraction * count)`` rows are boundary points;
    the rest are drawn from the interior.

    Raises:
        DegenerateSetError: If the set has no boundary point to offer.
    """
    rng = np.random.default_rng(seed)
    num_boundary = max(1, int(np.ceil(boundary_fraction * count)))
    boundary = sample_boundary(s, num_boundary, seed, tolerances=tolerances)
    rest = count - num_boundary
    interior: list[FloatArray] = []
    n = s.dim

    match s:
        case HPolyhedron():
            for _ in range(rest):
                picks = boundary[rng.integers(0, len(boundary), size=3)]
                interior.append(rng.dirichlet(np.ones(3)) @ picks)
        case VPolyhedron():
            interior = [_v_combination(s, rng) for _ in range(rest)]
        case Ellipsoid():
            for _ in range(rest):
                interior.append(boundary[rng.integers(len(boundary))] * rng.uniform(0.0, 1.0))
        case QuadraticSet():
            for k in range(rest):
                if k % 2 == 0:
                    interior.append(boundary[rng.integers(len(boundary))] * rng.uniform(0.0, 1.0))
                    continue
                z = rng.standard_normal(n)
                if float(z @ s.q @ z) <= 0.0:
                    interior.append(z * rng.uniform(0.1, 10.0))
                else:
                    interior.append(z / np.sqrt(float(z @ s.q @ z)) * rng.uniform(0.0, 1.0))
        case LorenzCone() | DoubleCone():
            transform = s.require_standard().transform
            for k in range(rest):
                w = rng.standard_normal(n - 1)
                height = float(np.linalg.norm(w)) * (1.0 + rng.uniform(0.0, 1.0))
                x = transform @ np.concatenate([w, [height]])
                flip = isinstance(s, DoubleCone) and k % 2 == 1
                interior.append(-x if flip else x)

    if not interior:
        return boundary
    return np.vstack([boundary, np.array(interior)])


def axis_point(s: LorenzCone | DoubleCone) -> FloatArray:
    """Return T e_n, the unit point of the cone axis in standard coordinates."""
    point: FloatArray = s.require_standard().transform[:, -1].copy()
    return point

