"""Data models for the simulation oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from invkit.conditions import EscapeWitness, Verdict
from invkit.numerics import FloatArray

MAGNITUDE_CAP = 1e150


class TrajectoryOverflowError(Exception):
    """Raised when a simulated state leaves the representable range."""


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Simulated states with their step indices or times.

    Attributes:
        states: One state per row ((steps + 1) x n).
        times: Step index (discrete) or time (continuous) of each row.
    """

    states: FloatArray
    times: FloatArray

    def __post_init__(self) -> None:
        states = np.array(self.states, dtype=np.float64)
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        if states.ndim != 2 or states.shape[0] != times.shape[0]:
            raise ValueError(
                f"{states.shape[0]} states do not match {times.shape[0]} time stamps"
            )
        if not (np.all(np.isfinite(states)) and np.all(np.isfinite(times))):
            raise ValueError("trajectory has non-finite entries")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return int(self.states.shape[0])

    @property
    def dim(self) -> int:
        """Return the state dimension."""
        return int(self.states.shape[1])

    @property
    def final(self) -> FloatArray:
        """Return the last state."""
        last: FloatArray = self.states[-1]
        return last


@dataclass(frozen=True, eq=False)
class FalsificationWitness:
    """Sampled member whose trajectory left the set.

    Attributes:
        sample_index: Position of the initial state in the sample.
        point: Initial state.
        step: First step at which the state classifies Outside.
        time: Matching time (step * dt for continuous systems).
        state: The state outside the set.
        slack: Membership slack of that state.
    """

    sample_index: int
    point: FloatArray
    step: int
    time: float
    state: FloatArray
    slack: float

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "sample_index": self.sample_index,
            "point": self.point.tolist(),
            "step": self.step,
            "time": self.time,
            "state": self.state.tolist(),
            "slack": self.slack,
        }

    def to_escape_witness(self, continuous: bool) -> EscapeWitness:
        """Return the witness in checker-report form."""
        return EscapeWitness(
            point=self.point,
            image=self.state,
            slack=self.slack,
            step=None if continuous else self.step,
            time=self.time if continuous else None,
        )


@dataclass(frozen=True, eq=False)
class NagumoReport:
    """Worst tangent-cone violation of A x over sampled boundary points."""

    clean: bool
    worst_margin: float
    worst_point: FloatArray | None
    checked: int

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "clean": self.clean,
            "worst_margin": self.worst_margin,
            "worst_point": self.worst_point.tolist() if self.worst_point is not None else None,
            "checked": self.checked,
        }


@dataclass(frozen=True)
class CrossValidation:
    """Agreement between a checker verdict and the oracle.

    A contradiction is a defect in either the checker or the oracle; the
    reproduction data (seed, tolerances, budget) is enough to replay it.
    """

    consistent: bool
    verdict: Verdict
    reason: str
    reproduction: dict[str, Any] = field(default_factory=dict)
    oracle_witness: FalsificationWitness | None = None

    def to_dict(self) -> dict[str, Any]:
        """Serialize to dictionary."""
        return {
            "consistent": self.consistent,
            "verdict": str(self.verdict),
            "reason": self.reason,
            "reproduction": self.reproduction,
            "oracle_witness": self.oracle_witness.to_dict() if self.oracle_witness else None,
        }
