"""Tests for trajectory simulation and falsification."""

from __future__ import annotations

import math

import numpy as np
import pytest

from invkit.oracle import (
    Trajectory,
    TrajectoryOverflowError,
    falsification_dt,
    falsify,
    propagators,
    simulate,
)
from invkit.problem import Problem, TimeRegime
from invkit.sets import DimensionMismatchError, HPolyhedron


class TestSimulate:
    """Tests for simulate."""

    def test_quarter_turn(self, disk_problem: Problem) -> None:
        """Test that the rotation moves (1, 0) to (0, 1) in pi/2."""
        trajectory = simulate(disk_problem, [1.0, 0.0], 1, dt=math.pi / 2)
        assert len(trajectory) == 2
        assert trajectory.final == pytest.approx([0.0, 1.0], abs=1e-12)
        assert trajectory.times == pytest.approx([0.0, math.pi / 2])

    def test_discrete_steps(self, doubling_problem: Problem) -> None:
        """Test that discrete times are step indices."""
        trajectory = simulate(doubling_problem, [0.5, 0.25], 2)
        assert trajectory.states.tolist() == [[0.5, 0.25], [1.0, 0.5], [2.0, 1.0]]
        assert trajectory.times.tolist() == [0.0, 1.0, 2.0]
        assert trajectory.dim == 2

    def test_zero_steps(self, doubling_problem: Problem) -> None:
        """Test that steps = 0 returns x0 alone."""
        assert len(simulate(doubling_problem, [1.0, 0.0], 0)) == 1

    def test_continuous_needs_dt(self, disk_problem: Problem) -> None:
        """Test that dt is mandatory in continuous time."""
        with pytest.raises(ValueError, match="dt"):
            simulate(disk_problem, [1.0, 0.0], 3)

    def test_wrong_dimension(self, disk_problem: Problem) -> None:
        """Test that x0 must match A."""
        with pytest.raises(DimensionMismatchError):
            simulate(disk_problem, [1.0, 0.0, 0.0], 1, dt=0.1)

    def test_negative_steps(self, doubling_problem: Problem) -> None:
        """Test that steps must be nonnegative."""
        with pytest.raises(ValueError, match="steps"):
            simulate(doubling_problem, [1.0, 0.0], -1)

    def test_overflow(self, square: HPolyhedron) -> None:
        """Test that states beyond the magnitude cap raise."""
        problem = Problem(a=1e100 * np.eye(2), time=TimeRegime.DISCRETE, region=square)
        with pytest.raises(TrajectoryOverflowError):
            simulate(problem, [1.0, 0.0], 3)

    def test_trajectory_shape_check(self) -> None:
        """Test that states and times must agree."""
        with pytest.raises(ValueError):
            Trajectory(states=np.zeros((3, 2)), times=np.zeros(2))


class TestPropagators:
    """Tests for propagators and the falsification steplength."""

    def test_discrete_powers(self, doubling_problem: Problem) -> None:
        """Test that discrete maps are powers of A."""
        maps = propagators(doubling_problem, 3)
        assert len(maps) == 4
        assert np.allclose(maps[3], 8.0 * np.eye(2))

    def test_stops_at_cap(self, square: HPolyhedron) -> None:
        """Test that propagation stops before overflowing."""
        problem = Problem(a=1e100 * np.eye(2), time=TimeRegime.DISCRETE, region=square)
        assert len(propagators(problem, 5)) == 2

    def test_falsification_dt(self) -> None:
        """Test min(0.1 / ||A||_F, 0.05)."""
        assert falsification_dt(np.eye(1)) == 0.05
        assert falsification_dt(10.0 * np.eye(1)) == pytest.approx(0.01)
        assert falsification_dt(np.zeros((2, 2))) == 0.05


class TestFalsify:
    """Tests for falsify."""

    def test_doubling_escapes_at_first_step(self, doubling_problem: Problem) -> None:
        """Test that a boundary sample leaves the square after one step."""
        witness = falsify(doubling_problem, 20, 3)
        assert witness is not None
        assert witness.sample_index == 0
        assert witness.step == 1
        assert witness.slack > 0.0

    def test_workers_give_same_witness(self, doubling_problem: Problem) -> None:
        """Test that the earliest witness does not depend on threading."""
        sequential = falsify(doubling_problem, 20, 3)
        threaded = falsify(doubling_problem, 20, 3, max_workers=4)
        assert sequential is not None
        assert threaded is not None
        assert (threaded.sample_index, threaded.step) == (sequential.sample_index, sequential.step)

    def test_contraction_survives(self, diamond_problem: Problem) -> None:
        """Test that x' = -x never leaves the diamond."""
        assert falsify(diamond_problem, 30, 20) is None

    def test_continuous_escape_time(self, diamond: HPolyhedron) -> None:
        """Test that continuous witnesses record step * dt."""
        problem = Problem(a=np.eye(2), time=TimeRegime.CONTINUOUS, region=diamond)
        witness = falsify(problem, 10, 5, dt=0.1)
        assert witness is not None
        assert witness.time == pytest.approx(0.1 * witness.step)
