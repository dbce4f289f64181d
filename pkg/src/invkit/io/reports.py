"""Report files and trajectory CSV.

A report file is self-contained: together with the problem file it is
enough to re-verify the certificate without re-running any solver.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import IO, Any

import numpy as np

from invkit import __version__
from invkit.conditions import (
    CertificateCheck,
    CheckReport,
    EscapeWitness,
    Verdict,
    certificate_from_dict,
    verify_certificate,
)
from invkit.config import Tolerances
from invkit.io.models import LoadedReport, ParseError, SchemaError
from invkit.io.problem_file import problem_to_dict
from invkit.oracle import Trajectory
from invkit.problem import Problem

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert numpy values to JSON types; non-finite floats become null."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def report_to_dict(report: CheckReport, problem: Problem) -> dict[str, Any]:
    """Return the report-file form of a check report."""
    data = report.to_dict()
    data["version"] = __version__
    data["seed"] = problem.seed
    data["problem"] = problem_to_dict(problem)
    result: dict[str, Any] = to_jsonable(data)
    return result


def write_report(path: Path, report: CheckReport, problem: Problem) -> None:
    """Write a report file.

    Raises:
        OSError: If the file cannot be written.
    """
    text = json.dumps(report_to_dict(report, problem), indent=2, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info("Report written to %s", path)


def load_report(path: Path) -> LoadedReport:
    """Read a report file back.

    Raises:
        OSError: If the file cannot be read.
        ParseError: If it is not JSON.
        SchemaError: If required fields are missing or malformed.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError("$", f"line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise SchemaError("$", "report must be a JSON object")

    try:
        verdict = Verdict(data["verdict"])
    except (KeyError, ValueError) as e:
        raise SchemaError("$.verdict", f"missing or unknown verdict: {e}") from e
    try:
        certificate = (
            certificate_from_dict(data["certificate"]) if data.get("certificate") else None
        )
    except ValueError as e:
        raise SchemaError("$.certificate", str(e)) from e
    try:
        witness = EscapeWitness.from_dict(data["witness"]) if data.get("witness") else None
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError("$.witness", f"malformed witness: {e}") from e

    return LoadedReport(
        verdict=verdict,
        checker=str(data.get("checker", "")),
        tolerances=Tolerances.from_dict(data.get("tolerances") or {}),
        seed=int(data.get("seed", 0)),
        version=str(data.get("version", "")),
        certificate=certificate,
        witness=witness,
        raw=data,
    )


def verify_report(loaded: LoadedReport, problem: Problem) -> CertificateCheck:
    """Re-verify a loaded report's certificate against the problem.

    Uses the tolerances stored in the report, so the result depends on
    nothing but the two files.
    """
    if loaded.certificate is None:
        return CertificateCheck(valid=False, reason="report carries no certificate")
    check = verify_certificate(
        problem.a, problem.region, problem.time, loaded.certificate, loaded.tolerances
    )
    logger.info("Certificate from %s re-verified: %s", loaded.checker, check.valid)
    return check


def write_trajectory_csv(stream: IO[str], trajectory: Trajectory) -> None:
    """Write a trajectory as CSV with header ``t,x1,...,xn``."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["t", *(f"x{i}" for i in range(1, trajectory.dim + 1))])
    for t, state in zip(trajectory.times, trajectory.states, strict=True):
        writer.writerow([repr(float(t)), *(repr(float(v)) for v in state)])
