"""CLI entry point for invkit.

Usage:
    invkit <command> <problem.json> [options]
    python -m invkit <command> <problem.json> [options]

Reports and CSV go to stdout (or --report PATH); logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import logging.config
import math
import sys
from collections.abc import Callable
from dataclasses import replace
from pathlib import Path
from typing import Any, NoReturn

import numpy as np
from pydantic import ValidationError

from invkit import __version__
from invkit.bridge import EulerMethod, default_dt_grid, max_preserving_dt
from invkit.conditions import (
    MuMode,
    UnsupportedProblemError,
    Verdict,
    check_boundary_flow,
    check_dual_halfspace,
    check_problem,
    classify_mu_geometry,
    closed_form_mu,
    eta_interval,
    mu_interval,
)
from invkit.config import Settings, clear_settings_cache, get_settings
from invkit.io import (
    ProblemFileError,
    load_problem,
    load_report,
    report_to_dict,
    to_jsonable,
    verify_report,
    write_report,
    write_trajectory_csv,
)
from invkit.lp import LPError
from invkit.numerics import NumericsError
from invkit.oracle import (
    TrajectoryOverflowError,
    falsification_dt,
    falsify,
    nagumo_sample_check,
    simulate,
)
from invkit.problem import Problem
from invkit.sets import DoubleCone, Ellipsoid, LorenzCone, SetError, sample_members

APP_NAME = "invkit"
APP_VERSION = __version__

# Exit codes
EXIT_INVARIANT = 0
EXIT_NOT_INVARIANT = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

VERDICT_EXIT_CODES = {
    Verdict.INVARIANT: EXIT_INVARIANT,
    Verdict.NOT_INVARIANT: EXIT_NOT_INVARIANT,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class CommandError(Exception):
    """A command was invoked with options it cannot use."""


INPUT_ERRORS = (
    ProblemFileError,
    SetError,
    NumericsError,
    LPError,
    UnsupportedProblemError,
    TrajectoryOverflowError,
    OSError,
    CommandError,
)

DEFAULT_K_MAX = 6

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the input-error code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _point(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _number(text: str) -> float:
    try:
        value = float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from e
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def _nonnegative(text: str) -> float:
    value = _number(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def _positive(text: str) -> float:
    value = _number(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _at_least(minimum: int) -> Callable[[str], int]:
    """Return an argparse type accepting integers >= minimum."""

    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from e
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}, got {value}")
        return value

    parse.__name__ = "integer"
    return parse


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser for the CLI.

    Returns:
        Configured ArgumentParser instance.
    """
    common = _Parser(add_help=False)
    common.add_argument("problem", type=Path, help="Problem file (JSON)")
    common.add_argument("--report", type=Path, default=None, help="Output file (default: stdout)")
    common.add_argument("--tol-psd", type=_nonnegative, default=None, help="Override psd_tol")
    common.add_argument("--tol-lp", type=_nonnegative, default=None, help="Override lp_tol")
    common.add_argument(
        "--tol-membership", type=_nonnegative, default=None, help="Override membership_tol"
    )
    common.add_argument(
        "--seed", type=_at_least(0), default=None, help="Seed for randomized steps"
    )
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help="Override logging level (default: INVKIT_LOG or INFO)",
    )

    parser = _Parser(
        prog="invkit",
        description="Verify positive invariance of sets under linear dynamics.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0  Invariant (or success)   1  NotInvariant (or witness found)
  2  Inconclusive             3  input or validation error

Examples:
  invkit check ex1.json --tol-psd 1e-8 --report out.json
  invkit verify ex1.json --report out.json
  invkit euler ex3.json --method backward --grid 16
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("check", parents=[common], help="Decide invariance, write a report")

    witness = commands.add_parser(
        "witness", parents=[common], help="Extract an escape witness from checker or oracle"
    )
    witness.add_argument(
        "--samples", type=_at_least(1), default=None, help="Oracle sample count"
    )
    witness.add_argument(
        "--steps", type=_at_least(1), default=None, help="Oracle steps per sample"
    )

    sim = commands.add_parser("simulate", parents=[common], help="Write a trajectory as CSV")
    sim.add_argument("--x0", type=_point, default=None, help="Initial state, e.g. 1,0")
    sim.add_argument("--steps", type=_at_least(1), default=None, help="Number of steps")
    sim.add_argument(
        "--dt", type=_positive, default=None, help="Observation spacing (continuous)"
    )

    euler = commands.add_parser("euler", parents=[common], help="Sweep Euler steplengths")
    euler.add_argument(
        "--method", choices=[m.value for m in EulerMethod], default=EulerMethod.BACKWARD.value
    )
    euler.add_argument(
        "--grid", type=_at_least(1), default=32, help="Number of log-spaced steplengths"
    )
    euler.add_argument("--dt", type=_positive, default=None, help="Check this single steplength")

    diagnose = commands.add_parser(
        "diagnose", parents=[common], help="Scalar intervals and geometric classification"
    )
    diagnose.add_argument(
        "--k-max", type=_at_least(2), default=DEFAULT_K_MAX, help="Boundary-flow order"
    )
    diagnose.add_argument("--samples", type=_at_least(1), default=None, help="Sample count")

    commands.add_parser(
        "verify", parents=[common], help="Re-verify the certificate stored in --report"
    )
    return parser


def configure_logging(level: str) -> None:
    """Configure logging to stderr so stdout carries reports.

    Args:
        level: Logging level string (DEBUG, INFO, etc.)
    """
    config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
            "detailed": {
                "format": (
                    "%(asctime)s [%(levelname)s] %(name)s (%(filename)s:%(lineno)d): %(message)s"
                ),
                "datefmt": "%Y-%m-%d %H:%M:%S",
            },
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "level": level,
                "formatter": "detailed" if level == "DEBUG" else "standard",
                "stream": "ext://sys.stderr",
            },
        },
        "root": {
            "level": level,
            "handlers": ["console"],
        },
    }
    logging.config.dictConfig(config)


def validate_config() -> Settings | None:
    """Validate and load configuration.

    Returns:
        Settings instance if valid, None if invalid.
    """
    try:
        clear_settings_cache()
        return get_settings()
    except ValidationError as e:
        print("Configuration validation failed:", file=sys.stderr)
        for error in e.errors():
            field = ".".join(str(loc) for loc in error["loc"])
            print(f"  {field}: {error['msg']}", file=sys.stderr)
        return None


def emit(data: dict[str, Any], path: Path | None) -> None:
    """Write JSON to path, or to stdout when no path is given."""
    text = json.dumps(to_jsonable(data), indent=2, allow_nan=False)
    if path is None:
        print(text)
    else:
        path.write_text(text + "\n", encoding="utf-8")


def load(args: argparse.Namespace, settings: Settings) -> Problem:
    """Load the problem with precedence defaults < env < file < flags."""
    problem = load_problem(
        args.problem, settings.tolerances.to_tolerances(), default_seed=settings.seed
    )
    problem = problem.with_tolerances(
        problem.tolerances.with_overrides(
            psd_tol=args.tol_psd, lp_tol=args.tol_lp, membership_tol=args.tol_membership
        )
    )
    return problem if args.seed is None else replace(problem, seed=args.seed)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def run_check(args: argparse.Namespace, problem: Problem, settings: Settings) -> int:
    """Run the matching checker and write the report."""
    report = check_problem(
        problem,
        max_workers=settings.max_workers,
        witness_budget=settings.oracle.witness_budget,
    )
    if args.report is not None:
        write_report(args.report, report, problem)
        print(f"{report.verdict} ({report.checker})")
    else:
        emit(report_to_dict(report, problem), None)
    return VERDICT_EXIT_CODES[report.verdict]


def run_witness(args: argparse.Namespace, problem: Problem, settings: Settings) -> int:
    """Print an escape witness; exit 1 when one is found."""
    report = check_problem(
        problem,
        max_workers=settings.max_workers,
        witness_budget=settings.oracle.witness_budget,
    )
    data: dict[str, Any] = {"verdict": str(report.verdict), "seed": problem.seed}
    if report.witness is not None:
        data.update(source="checker", witness=report.witness.to_dict())
    else:
        found = falsify(
            problem,
            args.samples or settings.oracle.samples,
            args.steps or settings.oracle.steps,
            max_workers=settings.max_workers,
        )
        data.update(source="oracle", witness=found.to_dict() if found else None)
    emit(data, args.report)
    return EXIT_NOT_INVARIANT if data["witness"] is not None else EXIT_INVARIANT


def run_simulate(args: argparse.Namespace, problem: Problem, settings: Settings) -> int:
    """Write the trajectory of --x0 (default: a sampled member) as CSV."""
    if args.x0 is not None:
        x0 = np.array(args.x0)
    else:
        x0 = sample_members(problem.region, 1, problem.seed, tolerances=problem.tolerances)[0]
    dt = None
    if problem.is_continuous:
        dt = args.dt if args.dt is not None else falsification_dt(problem.a)
    trajectory = simulate(problem, x0, args.steps or settings.oracle.steps, dt)
    if args.report is None:
        write_trajectory_csv(sys.stdout, trajectory)
    else:
        with args.report.open("w", encoding="utf-8", newline="") as stream:
            write_trajectory_csv(stream, trajectory)
    return EXIT_INVARIANT


def run_euler(args: argparse.Namespace, problem: Problem, settings: Settings) -> int:
    """Sweep Euler steplengths; exit 0 when some steplength passes."""
    if not problem.is_continuous:
        raise CommandError("euler needs a continuous-time problem")
    grid = [args.dt] if args.dt is not None else default_dt_grid(problem.a, args.grid)
    result = max_preserving_dt(
        problem,
        EulerMethod(args.method),
        grid,
        max_workers=settings.max_workers,
        witness_budget=settings.oracle.witness_budget,
    )
    emit(result.to_dict(), args.report)
    return EXIT_INVARIANT if result.largest_passing_dt is not None else EXIT_NOT_INVARIANT


def diagnose(problem: Problem, k_max: int, samples: int) -> dict[str, Any]:
    """Collect scalar intervals, classifications and sampled checks for a problem."""
    region, a, tol = problem.region, problem.a, problem.tolerances
    data: dict[str, Any] = {"type": str(region.kind), "time": str(problem.time)}
    if isinstance(region, Ellipsoid):
        eig, _ = closed_form_mu(a, region.q, tol.eig_tol)
        data["mu_min"] = eig.lambda_max
    if isinstance(region, (LorenzCone, DoubleCone)):
        data["mu_interval"] = mu_interval(a, region).to_dict()
        data["mu_interval_simple"] = mu_interval(a, region, MuMode.SIMPLE).to_dict()
        data["eta_interval"] = eta_interval(a, region).to_dict()
        data["geometry"] = classify_mu_geometry(a, region, tol).to_dict()
    if isinstance(region, LorenzCone):
        data["dual_halfspace"] = check_dual_halfspace(
            a, region, samples, problem.seed, tol
        ).to_dict()
    if isinstance(region, (Ellipsoid, LorenzCone, DoubleCone)):
        data["boundary_flow"] = check_boundary_flow(a, region.q, k_max, tol.psd_tol).to_dict()
    if problem.is_continuous:
        data["nagumo"] = nagumo_sample_check(problem, samples).to_dict()
    return data


def run_diagnose(args: argparse.Namespace, problem: Problem, settings: Settings) -> int:
    """Print the diagnostics of the problem."""
    emit(diagnose(problem, args.k_max, args.samples or settings.oracle.samples), args.report)
    return EXIT_INVARIANT


def run_verify(args: argparse.Namespace, problem: Problem, settings: Settings) -> int:
    """Re-verify a stored certificate from the report file alone."""
    if args.report is None:
        raise CommandError("verify needs --report PATH of an existing report")
    check = verify_report(load_report(args.report), problem)
    emit(check.to_dict(), None)
    return EXIT_INVARIANT if check.valid else EXIT_NOT_INVARIANT


COMMANDS = {
    "check": run_check,
    "witness": run_witness,
    "simulate": run_simulate,
    "euler": run_euler,
    "diagnose": run_diagnose,
    "verify": run_verify,
}


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Load the problem and run the command, mapping input errors to exit 3."""
    try:
        problem = load(args, settings)
        return COMMANDS[args.command](args, problem, settings)
    except INPUT_ERRORS as e:
        logger.debug("Input error", exc_info=True)
        print(f"{APP_NAME}: error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main(argv: list[str] | None = None) -> NoReturn:
    """Main entry point for the CLI.

    Args:
        argv: Command line arguments (defaults to sys.argv[1:]).
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    settings = validate_config()
    if settings is None:
        sys.exit(EXIT_INPUT_ERROR)

    configure_logging(args.log_level or settings.log_level)
    sys.exit(run(args, settings))


if __name__ == "__main__":
    main()
