"""Data models for the Euler bridge."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from invkit.conditions import Verdict


class EulerMethod(StrEnum):
    """Euler discretization of x' = A x."""

    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class EulerSpec:
    """Method plus steplength.

    Raises:
        ValueError: If dt is not a positive finite number.
    """

    method: EulerMethod
    dt: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be positive and finite, got {self.dt}")
        object.__setattr__(self, "method", EulerMethod(self.method))


@dataclass(frozen=True)
class DtVerdict:
    """Outcome of the discrete check at one grid steplength.

    ``verdict`` is None when the backward matrix I - dt A is singular.
    """

    dt: float
    verdict: Verdict | None
    singular: bool = False
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Return True when the discretized system keeps the set invariant."""
        return self.verdict is Verdict.INVARIANT

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "dt": self.dt,
            "verdict": str(self.verdict) if self.verdict is not None else None,
            "singular": self.singular,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class DtSweepResult:
    """Empirical largest passing dt on a grid, plus the full verdict table.

    The largest passing dt is an observation on the grid, never a proven
    supremum.
    """

    method: EulerMethod
    table: tuple[DtVerdict, ...]

    @property
    def largest_passing_dt(self) -> float | None:
        """Return the largest grid dt whose verdict is Invariant."""
        passing = [row.dt for row in self.table if row.passed]
        return max(passing) if passing else None

    @property
    def all_pass(self) -> bool:
        """Return True when every grid dt passes."""
        return all(row.passed for row in self.table)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "method": str(self.method),
            "largest_passing_dt": self.largest_passing_dt,
            "label": "empirical largest passing dt on grid",
            "table": [row.to_dict() for row in self.table],
        }
