"""The unit of work: a system matrix, a time regime and one candidate set."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import StrEnum

import numpy as np
from numpy.typing import ArrayLike

from invkit.config import Tolerances
from invkit.numerics import FloatArray, NumericsError, as_matrix
from invkit.sets import DimensionMismatchError, SetDescription


class TimeRegime(StrEnum):
    """Whether the system is x_{k+1} = A x_k or x' = A x."""

    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


@dataclass(frozen=True, eq=False)
class Problem:
    """Linear system plus candidate invariant set.

    Attributes:
        a: System matrix A (n x n).
        time: Discrete or continuous time.
        region: Candidate set of dimension n.
        tolerances: Thresholds governing every verdict.
        seed: Seed for every randomized operation on this problem.
    """

    a: FloatArray
    time: TimeRegime
    region: SetDescription
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0

    def __post_init__(self) -> None:
        try:
            a = as_matrix(self.a, square=True, name="A")
        except NumericsError as e:
            raise DimensionMismatchError(str(e)) from e
        if a.shape[0] != self.region.dim:
            raise DimensionMismatchError(
                f"A is {a.shape[0]}x{a.shape[0]} but the set has dimension {self.region.dim}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "time", TimeRegime(self.time))

    @property
    def dim(self) -> int:
        """Return the state dimension."""
        return int(self.a.shape[0])

    @property
    def is_continuous(self) -> bool:
        """Return True for x' = A x."""
        return self.time is TimeRegime.CONTINUOUS

    def with_matrix(self, a: ArrayLike, time: TimeRegime | None = None) -> Problem:
        """Return a copy with another system matrix (and optionally regime)."""
        return replace(self, a=np.array(a, dtype=np.float64), time=time or self.time)

    def with_tolerances(self, tolerances: Tolerances) -> Problem:
        """Return a copy with other tolerances."""
        return replace(self, tolerances=tolerances)
