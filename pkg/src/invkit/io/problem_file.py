"""Problem files: JSON text to a validated Problem and back."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from invkit.config import Tolerances
from invkit.io.models import ParseError, ProblemValidationError, SchemaError
from invkit.io.schema import (
    DoubleConeSpec,
    EllipsoidSpec,
    HConeSpec,
    HPolyhedronSpec,
    LorenzConeSpec,
    ProblemSpec,
    QuadraticSetSpec,
    SetSpec,
    VConeSpec,
    VPolyhedronSpec,
)
from invkit.problem import Problem
from invkit.sets import (
    DoubleCone,
    Ellipsoid,
    HPolyhedron,
    LorenzCone,
    QuadraticSet,
    SetDescription,
    SetError,
    VPolyhedron,
    validate,
)

logger = logging.getLogger(__name__)


def _error_path(loc: tuple[int | str, ...]) -> str:
    path = "$"
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def _build_set(spec: SetSpec) -> SetDescription:
    match spec:
        case HPolyhedronSpec():
            return HPolyhedron(g=np.array(spec.g), b=np.array(spec.b))
        case HConeSpec():
            return HPolyhedron.cone(spec.g)
        case VPolyhedronSpec():
            return VPolyhedron(vertices=np.array(spec.vertices), rays=np.array(spec.rays))
        case VConeSpec():
            return VPolyhedron.cone(spec.rays)
        case EllipsoidSpec():
            return Ellipsoid(q=np.array(spec.q))
        case QuadraticSetSpec():
            return QuadraticSet(q=np.array(spec.q))
        case LorenzConeSpec():
            axis = np.array(spec.axis) if spec.axis is not None else None
            return LorenzCone(q=np.array(spec.q), axis=axis)
        case DoubleConeSpec():
            axis = np.array(spec.axis) if spec.axis is not None else None
            return DoubleCone(q=np.array(spec.q), axis=axis)
    raise SchemaError("$.set.type", f"unsupported set {type(spec).__name__}")


def parse_problem(
    text: str, defaults: Tolerances | None = None, *, default_seed: int = 0
) -> Problem:
    """Parse a problem document into a validated Problem.

    Args:
        text: JSON document.
        defaults: Tolerances the file's ``tolerances`` object overrides.
        default_seed: Seed used when the file has none.

    Returns:
        The validated problem.

    Raises:
        ParseError: If the text is not JSON.
        SchemaError: If fields are missing, the set type is unknown or the
            dimensions of A and the set disagree.
        ProblemValidationError: If the set violates its definition, for
            example an ellipsoid whose Q is not positive definite.

    Example:
        ```python
        problem = parse_problem(Path("ex1.json").read_text())
        problem.region.kind  # SetKind.H_POLYHEDRON
        ```
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("$", f"line {e.lineno} column {e.colno}: {e.msg}") from e

    try:
        spec = ProblemSpec.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaError(_error_path(tuple(first["loc"])), first["msg"]) from e

    try:
        region = _build_set(spec.region)
    except SetError as e:
        raise SchemaError("$.set", str(e)) from e

    tolerances = defaults or Tolerances()
    if spec.tolerances is not None:
        tolerances = tolerances.with_overrides(**spec.tolerances.model_dump())

    try:
        problem = Problem(
            a=np.array(spec.system.a),
            time=spec.system.time,
            region=region,
            tolerances=tolerances,
            seed=default_seed if spec.seed is None else spec.seed,
        )
    except SetError as e:
        raise SchemaError("$.system.A", str(e)) from e

    report = validate(region, tolerances)
    if not report.valid:
        raise ProblemValidationError("$.set", "; ".join(report.violations))
    logger.debug("Parsed %s problem on %s (n=%d)", problem.time, region.kind, problem.dim)
    return problem


def load_problem(
    path: Path, defaults: Tolerances | None = None, *, default_seed: int = 0
) -> Problem:
    """Read and parse a problem file.

    Raises:
        OSError: If the file cannot be read.
        ProblemFileError: As for :func:`parse_problem`.
    """
    return parse_problem(path.read_text(encoding="utf-8"), defaults, default_seed=default_seed)


def _set_to_dict(region: SetDescription) -> dict[str, Any]:
    match region:
        case HPolyhedron() if region.is_cone:
            return {"type": "h_cone", "G": region.g.tolist()}
        case HPolyhedron():
            return {"type": "h_polyhedron", "G": region.g.tolist(), "b": region.b.tolist()}
        case VPolyhedron() if region.is_cone:
            return {"type": "v_cone", "rays": region.rays.tolist()}
        case VPolyhedron():
            return {
                "type": "v_polyhedron",
                "vertices": region.vertices.tolist(),
                "rays": region.rays.tolist(),
            }
        case Ellipsoid() | QuadraticSet():
            return {"type": str(region.kind), "Q": region.q.tolist()}
        case LorenzCone() | DoubleCone():
            data: dict[str, Any] = {"type": str(region.kind), "Q": region.q.tolist()}
            if region.axis is not None:
                data["axis"] = region.axis.tolist()
            return data
    raise TypeError(f"unsupported set description {type(region).__name__}")


def problem_to_dict(problem: Problem) -> dict[str, Any]:
    """Return the problem-file form of a problem."""
    return {
        "system": {"A": problem.a.tolist(), "time": str(problem.time)},
        "set": _set_to_dict(problem.region),
        "tolerances": problem.tolerances.to_dict(),
        "seed": problem.seed,
    }


def serialize_problem(problem: Problem) -> str:
    """Serialize a problem to JSON text that :func:`parse_problem` reads back."""
    return json.dumps(problem_to_dict(problem), indent=2, allow_nan=False)
