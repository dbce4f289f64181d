"""One-dimensional searches over scalar LMI parameters.

lambda_1 of an affine symmetric matrix family is convex in the parameter,
so a ternary search finds its minimum and a bisection finds the largest
parameter at which it stays below a level.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

from invkit.config import DEFAULT_MU_SEARCH_TOL

logger = logging.getLogger(__name__)

MAX_SEARCH_ITERATIONS = 200
GOLDEN = 0.5 * (5.0**0.5 - 1.0)


@dataclass(frozen=True)
class SearchResult:
    """Minimizer of a convex scalar function on an interval."""

    argmin: float
    value: float
    iterations: int


def ternary_minimize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_MU_SEARCH_TOL,
    max_iter: int = MAX_SEARCH_ITERATIONS,
) -> SearchResult:
    """Minimize a convex function on [lo, hi] by golden-section search.

    Endpoints are evaluated too, so a minimum at a bound of the interval is
    returned exactly.

    Args:
        f: Convex function.
        lo: Left end.
        hi: Right end (lo <= hi).
        tol: Width at which the bracket stops shrinking.
        max_iter: Iteration cap.

    Returns:
        The best point found and its value.
    """
    if lo > hi:
        raise ValueError(f"empty search interval [{lo}, {hi}]")
    best_x, best_f = lo, f(lo)
    f_hi = f(hi)
    if f_hi < best_f:
        best_x, best_f = hi, f_hi
    if hi - lo <= tol:
        return SearchResult(argmin=best_x, value=best_f, iterations=0)

    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    iterations = 0
    while b - a > tol and iterations < max_iter:
        iterations += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f:
            best_x, best_f = x, fx
    logger.debug(
        "Ternary search: min %.6g at %.10g after %d iterations", best_f, best_x, iterations
    )
    return SearchResult(argmin=best_x, value=best_f, iterations=iterations)


def largest_feasible(
    f: Callable[[float], float],
    feasible: float,
    hi: float,
    level: float,
    tol: float = DEFAULT_MU_SEARCH_TOL,
    max_iter: int = MAX_SEARCH_ITERATIONS,
) -> float:
    """Largest t in [feasible, hi] with f(t) <= level, for convex f.

    ``feasible`` must satisfy f(feasible) <= level; the feasible set is an
    interval containing it, so bisection on its right end converges.
    """
    if f(hi) <= level:
        return hi
    a, b = feasible, hi
    iterations = 0
    while b - a > tol and iterations < max_iter:
        iterations += 1
        mid = 0.5 * (a + b)
        if f(mid) <= level:
            a = mid
        else:
            b = mid
    return a
