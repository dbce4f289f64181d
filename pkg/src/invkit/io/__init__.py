"""Problem and report files."""

from invkit.io.models import (
    LoadedReport,
    ParseError,
    ProblemFileError,
    ProblemValidationError,
    SchemaError,
)
from invkit.io.problem_file import load_problem, parse_problem, problem_to_dict, serialize_problem
from invkit.io.reports import (
    load_report,
    report_to_dict,
    to_jsonable,
    verify_report,
    write_report,
    write_trajectory_csv,
)
from invkit.io.schema import ProblemSpec

__all__ = [
    "LoadedReport",
    "ParseError",
    "ProblemFileError",
    "ProblemSpec",
    "ProblemValidationError",
    "SchemaError",
    "load_problem",
    "load_report",
    "parse_problem",
    "problem_to_dict",
    "report_to_dict",
    "serialize_problem",
    "to_jsonable",
    "verify_report",
    "write_report",
    "write_trajectory_csv",
]
