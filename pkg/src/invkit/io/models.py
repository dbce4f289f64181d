"""Errors and records of the file layer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from invkit.conditions import Certificate, EscapeWitness, Verdict
from invkit.config import Tolerances


class ProblemFileError(Exception):
    """Base exception for unusable problem or report files.

    Attributes:
        path: Location of the offending value (``$`` for the whole document).
        reason: What is wrong with it.
    """

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class ParseError(ProblemFileError):
    """Raised for malformed JSON."""


class SchemaError(ProblemFileError):
    """Raised for unknown set types, missing fields or mismatched dimensions."""


class ProblemValidationError(ProblemFileError):
    """Raised when a well-formed set violates its definition."""


@dataclass(frozen=True)
class LoadedReport:
    """A report file read back from disk."""

    verdict: Verdict
    checker: str
    tolerances: Tolerances
    seed: int
    version: str
    certificate: Certificate | None = None
    witness: EscapeWitness | None = None
    raw: dict[str, Any] = field(default_factory=dict, repr=False)
