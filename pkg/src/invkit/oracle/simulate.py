"""Trajectory propagation and sampled falsification.

Continuous trajectories use the matrix exponential at every observation
time, so dt only controls how densely a trajectory is observed.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.typing import ArrayLike

from invkit.numerics import FloatArray, MatrixOverflowError, as_vector, frobenius, mat_exp
from invkit.oracle.models import (
    MAGNITUDE_CAP,
    FalsificationWitness,
    Trajectory,
    TrajectoryOverflowError,
)
from invkit.problem import Problem
from invkit.sets import DimensionMismatchError, SetError, membership, sample_members

logger = logging.getLogger(__name__)

DEFAULT_FALSIFY_DT_SCALE = 0.1
DEFAULT_FALSIFY_DT_CAP = 0.05


def falsification_dt(a: FloatArray) -> float:
    """Return min(0.1 / ||A||_F, 0.05)."""
    norm = frobenius(a)
    if norm == 0.0:
        return DEFAULT_FALSIFY_DT_CAP
    return min(DEFAULT_FALSIFY_DT_SCALE / norm, DEFAULT_FALSIFY_DT_CAP)


def _finite(m: FloatArray) -> bool:
    return bool(np.all(np.isfinite(m)) and np.max(np.abs(m), initial=0.0) <= MAGNITUDE_CAP)


def propagators(problem: Problem, steps: int, dt: float | None = None) -> list[FloatArray]:
    """Return the maps x0 -> x_j for j = 0..steps, stopping early on overflow.

    Discrete maps are A^j; continuous maps are e^{A j dt}.
    """
    n = problem.dim
    maps: list[FloatArray] = [np.eye(n)]
    for j in range(1, steps + 1):
        try:
            if problem.is_continuous:
                step_dt = dt if dt is not None else falsification_dt(problem.a)
                nxt = mat_exp(problem.a, j * step_dt, problem.tolerances.exp_tol)
            else:
                nxt = problem.a @ maps[-1]
        except MatrixOverflowError:
            nxt = np.full((n, n), np.inf)
        if not _finite(nxt):
            logger.debug("Propagation stopped at step %d: magnitude cap exceeded", j)
            break
        maps.append(nxt)
    return maps


def simulate(
    problem: Problem,
    x0: ArrayLike,
    steps: int,
    dt: float | None = None,
) -> Trajectory:
    """Propagate x0 through the problem's dynamics.

    Args:
        problem: System and regime.
        x0: Initial state.
        steps: Number of steps after x0.
        dt: Observation spacing for continuous systems.

    Returns:
        steps + 1 states with step indices (discrete) or times j * dt.

    Raises:
        DimensionMismatchError: If x0 does not match the system dimension.
        ValueError: If steps < 0, or dt is missing or not positive for a
            continuous system.
        TrajectoryOverflowError: If a state exceeds the magnitude cap.
    """
    point = as_vector(x0, name="x0")
    if point.shape[0] != problem.dim:
        raise DimensionMismatchError(f"x0 has {point.shape[0]} entries, expected {problem.dim}")
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    if problem.is_continuous and (dt is None or not dt > 0.0):
        raise ValueError(f"continuous simulation needs a positive dt, got {dt}")

    states = [point]
    for j in range(1, steps + 1):
        try:
            if problem.is_continuous:
                assert dt is not None
                state = mat_exp(problem.a, j * dt, problem.tolerances.exp_tol) @ point
            else:
                state = problem.a @ states[-1]
        except MatrixOverflowError as e:
            raise TrajectoryOverflowError(f"state {j} overflows: {e}") from e
        if not _finite(state):
            raise TrajectoryOverflowError(
                f"state {j} exceeds the magnitude cap {MAGNITUDE_CAP:.0e}"
            )
        states.append(state)

    scale = dt if problem.is_continuous and dt is not None else 1.0
    times = np.arange(steps + 1, dtype=np.float64) * scale
    return Trajectory(states=np.array(states), times=times)


def _first_exit(
    problem: Problem, maps: list[FloatArray], index: int, x: FloatArray, dt: float
) -> FalsificationWitness | None:
    for j in range(1, len(maps)):
        state = maps[j] @ x
        position = membership(problem.region, state, tolerances=problem.tolerances)
        if position.is_outside:
            return FalsificationWitness(
                sample_index=index,
                point=x,
                step=j,
                time=j * dt if problem.is_continuous else float(j),
                state=state,
                slack=position.slack,
            )
    return None


def falsify(
    problem: Problem,
    samples: int,
    steps: int,
    seed: int | None = None,
    *,
    dt: float | None = None,
    max_workers: int = 1,
) -> FalsificationWitness | None:
    """Search sampled members for a trajectory that leaves the set.

    Boundary points are sampled first. The returned witness is the earliest
    (sample index, step) pair, independent of ``max_workers``.

    Args:
        problem: Problem whose set is sampled.
        samples: Number of initial states.
        steps: Steps simulated per initial state.
        seed: Sampling seed; defaults to the problem seed.
        dt: Observation spacing for continuous systems; defaults to
            min(0.1 / ||A||_F, 0.05).
        max_workers: Samples evaluated concurrently.

    Returns:
        The earliest witness, or None when every trajectory stays inside.
    """
    seed = problem.seed if seed is None else seed
    if problem.is_continuous:
        dt = dt if dt is not None else falsification_dt(problem.a)
    else:
        dt = 1.0
    try:
        points = sample_members(problem.region, samples, seed, tolerances=problem.tolerances)
    except SetError as e:
        logger.warning("Nothing to falsify: %s", e)
        return None
    maps = propagators(problem, steps, dt)

    def run(index: int) -> FalsificationWitness | None:
        return _first_exit(problem, maps, index, points[index], dt)

    witness: FalsificationWitness | None = None
    if max_workers <= 1:
        for index in range(len(points)):
            witness = run(index)
            if witness is not None:
                break
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            found = [w for w in pool.map(run, range(len(points))) if w is not None]
        witness = min(found, key=lambda w: (w.sample_index, w.step), default=None)

    if witness is not None:
        logger.info(
            "Falsified: sample %d leaves the set at step %d (slack %.3e)",
            witness.sample_index,
            witness.step,
            witness.slack,
        )
    else:
        logger.debug("No escape in %d samples x %d steps", len(points), len(maps) - 1)
    return witness
