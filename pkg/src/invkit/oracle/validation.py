"""Sampled Nagumo checks and checker/oracle cross-validation."""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from invkit.conditions import CheckReport, EscapeWitness, Verdict
from invkit.config import DEFAULT_ORACLE_SAMPLES, DEFAULT_ORACLE_STEPS
from invkit.numerics import FloatArray, MatrixOverflowError, mat_exp
from invkit.oracle.models import CrossValidation, FalsificationWitness, NagumoReport
from invkit.oracle.simulate import falsification_dt, falsify
from invkit.problem import Problem
from invkit.sets import (
    DoubleCone,
    LorenzCone,
    NotOnBoundaryError,
    QuadraticSet,
    membership,
    sample_boundary,
    tangent_cone_margin,
)

logger = logging.getLogger(__name__)


def nagumo_sample_check(
    problem: Problem,
    samples: int = DEFAULT_ORACLE_SAMPLES,
    seed: int | None = None,
) -> NagumoReport:
    """Evaluate the tangent-cone condition A x in T_S(x) on sampled boundary points.

    Raises:
        ValueError: If the problem is discrete.
        DegenerateSetError: If the set has no boundary to sample.
    """
    if not problem.is_continuous:
        raise ValueError("the tangent-cone condition applies to continuous-time problems")
    seed = problem.seed if seed is None else seed
    tolerances = problem.tolerances
    points = sample_boundary(problem.region, samples, seed, tolerances=tolerances)
    worst = -np.inf
    worst_point: FloatArray | None = None
    checked = 0
    for x in points:
        try:
            margin = tangent_cone_margin(problem.region, x, problem.a @ x, tolerances=tolerances)
        except NotOnBoundaryError:
            continue
        checked += 1
        if margin > worst:
            worst, worst_point = margin, x
    clean = checked > 0 and worst <= tolerances.membership_tol
    if not clean and checked:
        logger.info("Tangent-cone violation %.3e at %s", worst, worst_point)
    return NagumoReport(
        clean=clean,
        worst_margin=float(worst),
        worst_point=None if clean else worst_point,
        checked=checked,
    )


def replay_witness(problem: Problem, witness: EscapeWitness) -> float | None:
    """Replay a stored witness and return the slack of its exit state.

    The start must be a member and the replayed state must classify
    Outside; otherwise None is returned.
    """
    tolerances = problem.tolerances
    start = membership(problem.region, witness.point, tolerances=tolerances)
    if start.is_outside:
        logger.debug("Witness start lies outside the set (slack %.3e)", start.slack)
        return None
    try:
        if problem.is_continuous:
            if witness.time is None:
                return None
            state = mat_exp(problem.a, witness.time, tolerances.exp_tol) @ witness.point
        else:
            step = witness.step if witness.step is not None else 1
            state = np.linalg.matrix_power(problem.a, step) @ witness.point
    except MatrixOverflowError:
        return None
    end = membership(problem.region, state, tolerances=tolerances)
    return end.slack if end.is_outside else None


def _witness_mandatory(problem: Problem) -> bool:
    return not isinstance(problem.region, (LorenzCone, DoubleCone, QuadraticSet))


def cross_validate(
    problem: Problem,
    report: CheckReport,
    samples: int = DEFAULT_ORACLE_SAMPLES,
    steps: int = DEFAULT_ORACLE_STEPS,
    *,
    seed: int | None = None,
    max_workers: int = 1,
) -> CrossValidation:
    """Confront a checker report with the simulation oracle.

    Invariant reports must survive falsification within the budget.
    NotInvariant reports must carry a witness that replays to an exit; for
    cones the witness is best-effort, so a missing one is not a defect.
    Absence of an oracle witness never upgrades a verdict.
    """
    seed = problem.seed if seed is None else seed
    reproduction: dict[str, Any] = {
        "seed": seed,
        "samples": samples,
        "steps": steps,
        "dt": falsification_dt(problem.a) if problem.is_continuous else None,
        "tolerances": problem.tolerances.to_dict(),
        "checker": report.checker,
    }

    def result(
        consistent: bool, reason: str, witness: FalsificationWitness | None = None
    ) -> CrossValidation:
        if not consistent:
            logger.error("Checker/oracle contradiction for %s: %s", report.checker, reason)
        return CrossValidation(
            consistent=consistent,
            verdict=report.verdict,
            reason=reason,
            reproduction=reproduction,
            oracle_witness=witness,
        )

    match report.verdict:
        case Verdict.INVARIANT:
            found = falsify(problem, samples, steps, seed, max_workers=max_workers)
            if found is not None:
                return result(
                    False,
                    f"Invariant verdict but sample {found.sample_index} leaves the set "
                    f"at step {found.step}",
                    found,
                )
            return result(True, "no escape found within the oracle budget")
        case Verdict.NOT_INVARIANT:
            if report.witness is None:
                if _witness_mandatory(problem):
                    return result(False, "NotInvariant verdict without an escape witness")
                found = falsify(problem, samples, steps, seed, max_workers=max_workers)
                reason = "no stored witness; " + (
                    "oracle found an escape" if found else "oracle found none"
                )
                return result(True, reason, found)
            slack = replay_witness(problem, report.witness)
            if slack is None:
                return result(False, "stored witness does not replay to an exit")
            reproduction["replay_slack"] = slack
            return result(True, "stored witness confirmed")
    return result(True, "Inconclusive verdicts are not cross-validated")
