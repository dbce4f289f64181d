"""Escape witnesses: members of a set whose trajectory leaves it.

Discrete witnesses leave at step 1. Continuous witnesses are found by
scanning e^{At} x over a geometric time grid and keeping the first state
that classifies Outside, so every stored witness replays exactly through
the matrix exponential.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable

import numpy as np

from invkit.conditions.models import EscapeWitness
from invkit.config import DEFAULT_WITNESS_BUDGET, Tolerances
from invkit.numerics import FloatArray, MatrixOverflowError, frobenius, mat_exp
from invkit.sets import (
    NotOnBoundaryError,
    SetDescription,
    SetError,
    membership,
    sample_boundary,
    sample_members,
    tangent_cone_margin,
)

logger = logging.getLogger(__name__)

EXIT_GRID_POINTS = 80
EXIT_GRID_START = 1e-6
EXIT_GRID_STOP = 1e2
OUTWARD_CANDIDATES = 8


def discrete_escape(
    a: FloatArray, region: SetDescription, x: FloatArray, tolerances: Tolerances
) -> EscapeWitness | None:
    """Return a step-1 witness when A x classifies Outside."""
    image = a @ x
    position = membership(region, image, tolerances=tolerances)
    if not position.is_outside:
        return None
    return EscapeWitness(point=x, image=image, slack=position.slack, step=1)


def find_continuous_exit(
    a: FloatArray,
    region: SetDescription,
    x: FloatArray,
    tolerances: Tolerances | None = None,
    *,
    points: int = EXIT_GRID_POINTS,
) -> EscapeWitness | None:
    """Find the first grid time at which e^{At} x classifies Outside.

    The grid is geometric on [1e-6, 1e2] / ||A||_F. Returns None when the
    trajectory stays in the set on the whole grid (or A = 0).
    """
    tolerances = tolerances or Tolerances()
    norm = frobenius(a)
    if norm == 0.0:
        return None
    for t in np.geomspace(EXIT_GRID_START, EXIT_GRID_STOP, points) / norm:
        try:
            state = mat_exp(a, float(t), tolerances.exp_tol) @ x
        except MatrixOverflowError:
            logger.debug("Exit scan stopped at t = %.3e: exponential overflow", t)
            return None
        position = membership(region, state, tolerances=tolerances)
        if position.is_outside:
            return EscapeWitness(point=x, image=state, slack=position.slack, time=float(t))
    return None


def _first_escape(
    a: FloatArray, region: SetDescription, candidates: Iterable[FloatArray], tolerances: Tolerances
) -> EscapeWitness | None:
    for x in candidates:
        witness = discrete_escape(a, region, x, tolerances)
        if witness is not None:
            return witness
    return None


def sample_discrete_escape(
    a: FloatArray,
    region: SetDescription,
    tolerances: Tolerances,
    *,
    budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
    first: Iterable[FloatArray] = (),
) -> EscapeWitness | None:
    """Best-effort step-1 witness among ``first`` and up to budget sampled members."""
    witness = _first_escape(a, region, first, tolerances)
    if witness is not None or budget < 1:
        return witness
    try:
        samples = sample_members(region, budget, seed, tolerances=tolerances)
    except SetError as e:
        logger.debug("No members to sample: %s", e)
        return None
    return _first_escape(a, region, samples, tolerances)


def sample_continuous_escape(
    a: FloatArray,
    region: SetDescription,
    tolerances: Tolerances,
    *,
    budget: int = DEFAULT_WITNESS_BUDGET,
    seed: int = 0,
    first: Iterable[FloatArray] = (),
) -> EscapeWitness | None:
    """Best-effort continuous witness from boundary points with outward flow.

    Sampled boundary points are ranked by their tangent-cone violation for
    the field A x; the exit scan runs on the most outward ones.
    """
    try:
        samples: Iterable[FloatArray] = sample_boundary(region, budget, seed, tolerances=tolerances)
    except SetError as e:
        logger.debug("No boundary to sample: %s", e)
        samples = ()
    ranked: list[tuple[float, int, FloatArray]] = []
    for k, x in enumerate(itertools.chain(first, samples)):
        try:
            margin = tangent_cone_margin(region, x, a @ x, tolerances=tolerances)
        except NotOnBoundaryError:
            continue
        if margin > tolerances.membership_tol:
            ranked.append((-margin, k, x))
    ranked.sort(key=lambda item: (item[0], item[1]))
    for _, _, x in ranked[:OUTWARD_CANDIDATES]:
        witness = find_continuous_exit(a, region, x, tolerances)
        if witness is not None:
            return witness
    return None
