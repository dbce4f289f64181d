"""Data models for the numerics module."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]


class Definiteness(StrEnum):
    """Tri-state outcome of a negative-semidefiniteness test."""

    NEG_SEMIDEFINITE = "NegSemidefinite"
    NOT_NEG_SEMIDEFINITE = "NotNegSemidefinite"
    MARGINAL = "Marginal"


@dataclass(frozen=True, eq=False)
class SymEig:
    """Eigen-decomposition of a symmetric matrix.

    Attributes:
        eigenvalues: Eigenvalues sorted descending.
        eigenvectors: Orthonormal matrix whose column i pairs with eigenvalues[i].
    """

    eigenvalues: FloatArray
    eigenvectors: FloatArray

    @property
    def dim(self) -> int:
        """Return the matrix dimension."""
        return int(self.eigenvalues.shape[0])

    @property
    def lambda_max(self) -> float:
        """Return the largest eigenvalue."""
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        """Return the smallest eigenvalue."""
        return float(self.eigenvalues[-1])

    def vector(self, index: int) -> FloatArray:
        """Return the eigenvector paired with eigenvalues[index]."""
        return self.eigenvectors[:, index].copy()

    def reconstruct(self) -> FloatArray:
        """Return U diag(lambda) U^T."""
        u = self.eigenvectors
        result: FloatArray = (u * self.eigenvalues) @ u.T
        return result


@dataclass(frozen=True)
class Inertia:
    """Counts of positive, zero and negative eigenvalues."""

    positive: int
    zero: int
    negative: int

    @property
    def dim(self) -> int:
        """Return the total count."""
        return self.positive + self.zero + self.negative

    def as_tuple(self) -> tuple[int, int, int]:
        """Return (positive, zero, negative)."""
        return (self.positive, self.zero, self.negative)

    def __str__(self) -> str:
        return f"({self.positive},{self.zero},{self.negative})"
