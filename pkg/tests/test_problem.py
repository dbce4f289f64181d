"""Tests for the Problem record."""

from __future__ import annotations

import numpy as np
import pytest

from invkit.config import Tolerances
from invkit.problem import Problem, TimeRegime
from invkit.sets import DimensionMismatchError, Ellipsoid, HPolyhedron


class TestProblem:
    """Tests for Problem construction and copies."""

    def test_accepts_matching_dimensions(self, diamond: HPolyhedron) -> None:
        """Test a well-formed problem."""
        problem = Problem(a=[[0.0, 1.0], [-1.0, 0.0]], time="discrete", region=diamond)
        assert problem.dim == 2
        assert problem.time is TimeRegime.DISCRETE
        assert not problem.is_continuous
        assert problem.a.dtype == np.float64

    def test_dimension_mismatch_raises(self, diamond: HPolyhedron) -> None:
        """Test that A must match the set dimension."""
        with pytest.raises(DimensionMismatchError, match="dimension 2"):
            Problem(a=np.eye(3), time=TimeRegime.DISCRETE, region=diamond)

    def test_non_square_raises(self, unit_disk: Ellipsoid) -> None:
        """Test that A must be square."""
        with pytest.raises(DimensionMismatchError):
            Problem(a=np.ones((2, 3)), time=TimeRegime.CONTINUOUS, region=unit_disk)

    def test_non_finite_raises(self, unit_disk: Ellipsoid) -> None:
        """Test that NaN entries are rejected."""
        with pytest.raises(DimensionMismatchError):
            Problem(a=[[np.nan, 0.0], [0.0, 1.0]], time=TimeRegime.CONTINUOUS, region=unit_disk)

    def test_with_matrix_switches_regime(self, diamond_problem: Problem) -> None:
        """Test the copy used by the Euler bridge."""
        copy = diamond_problem.with_matrix(0.5 * np.eye(2), TimeRegime.DISCRETE)
        assert copy.time is TimeRegime.DISCRETE
        assert copy.region is diamond_problem.region
        assert diamond_problem.is_continuous

    def test_with_tolerances(self, diamond_problem: Problem) -> None:
        """Test replacing tolerances keeps everything else."""
        copy = diamond_problem.with_tolerances(Tolerances(lp_tol=1e-6))
        assert copy.tolerances.lp_tol == 1e-6
        assert np.array_equal(copy.a, diamond_problem.a)
