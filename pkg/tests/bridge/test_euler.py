"""Tests for the Euler bridge."""

from __future__ import annotations

import numpy as np
import pytest

from invkit.bridge import (
    EulerMethod,
    EulerSpec,
    default_dt_grid,
    discretize,
    max_preserving_dt,
)
from invkit.conditions import Verdict
from invkit.numerics import SingularMatrixError
from invkit.problem import Problem, TimeRegime
from invkit.sets import Ellipsoid, HPolyhedron, LorenzCone


class TestDiscretize:
    """Tests for discretize and EulerSpec."""

    def test_forward(self) -> None:
        """Test I + dt A."""
        result = discretize(-np.eye(2), EulerSpec(EulerMethod.FORWARD, 0.1))
        assert np.allclose(result, 0.9 * np.eye(2))

    def test_backward(self) -> None:
        """Test (I - dt A)^{-1}."""
        result = discretize(-np.eye(2), EulerSpec(EulerMethod.BACKWARD, 1.0))
        assert np.allclose(result, 0.5 * np.eye(2))

    def test_backward_singular(self) -> None:
        """Test that 1/dt as an eigenvalue of A is singular."""
        with pytest.raises(SingularMatrixError):
            discretize(np.eye(2), EulerSpec(EulerMethod.BACKWARD, 1.0))

    @pytest.mark.parametrize("dt", [0.0, -1.0, float("inf"), float("nan")])
    def test_invalid_dt(self, dt: float) -> None:
        """Test that dt must be positive and finite."""
        with pytest.raises(ValueError, match="dt"):
            EulerSpec(EulerMethod.FORWARD, dt)

    def test_method_from_string(self) -> None:
        """Test that the method is coerced from its name."""
        assert EulerSpec("backward", 0.5).method is EulerMethod.BACKWARD  # type: ignore[arg-type]


class TestDefaultGrid:
    """Tests for default_dt_grid."""

    def test_scaled_by_norm(self) -> None:
        """Test the ends of the grid for ||A||_F = 2."""
        grid = default_dt_grid(2.0 * np.eye(1), points=5)
        assert len(grid) == 5
        assert grid[0] == pytest.approx(0.5e-4)
        assert grid[-1] == pytest.approx(1.0)
        assert grid == sorted(grid)

    def test_zero_matrix(self) -> None:
        """Test that A = 0 uses unit scale."""
        assert default_dt_grid(np.zeros((2, 2)), points=2)[-1] == pytest.approx(2.0)

    def test_needs_points(self) -> None:
        """Test that an empty grid is rejected."""
        with pytest.raises(ValueError):
            default_dt_grid(np.eye(2), points=0)


class TestMaxPreservingDt:
    """Tests for max_preserving_dt."""

    def test_contracting_diamond_forward(self, diamond_problem: Problem) -> None:
        """Test that forward Euler keeps the diamond on the default grid."""
        grid = default_dt_grid(diamond_problem.a, points=8)
        result = max_preserving_dt(diamond_problem, EulerMethod.FORWARD, grid)
        assert result.all_pass
        assert result.largest_passing_dt == pytest.approx(grid[-1])

    def test_rotation_forward_fails(self, disk_problem: Problem) -> None:
        """Test that I + dt R expands the disk."""
        result = max_preserving_dt(disk_problem, EulerMethod.FORWARD, [0.1, 0.5])
        assert result.largest_passing_dt is None
        assert [row.verdict for row in result.table] == [Verdict.NOT_INVARIANT] * 2

    def test_rotation_backward_passes(self, disk_problem: Problem) -> None:
        """Test that (I - dt R)^{-1} contracts the disk."""
        grid = default_dt_grid(disk_problem.a, points=6)
        result = max_preserving_dt(disk_problem, EulerMethod.BACKWARD, grid, max_workers=3)
        assert result.all_pass
        assert [row.dt for row in result.table] == grid

    def test_singular_grid_point(self, diamond: HPolyhedron) -> None:
        """Test that a singular backward step is recorded, not raised."""
        problem = Problem(a=np.eye(2), time=TimeRegime.CONTINUOUS, region=diamond)
        result = max_preserving_dt(problem, EulerMethod.BACKWARD, [0.5, 1.0, 2.0])
        singular = result.table[1]
        assert singular.singular
        assert singular.verdict is None
        assert result.table[0].verdict is Verdict.NOT_INVARIANT
        assert result.largest_passing_dt == 2.0

    def test_to_dict(self, diamond_problem: Problem) -> None:
        """Test the serialized sweep."""
        data = max_preserving_dt(diamond_problem, EulerMethod.FORWARD, [0.1]).to_dict()
        assert data["method"] == "forward"
        assert data["table"][0]["verdict"] == "Invariant"

    def test_rejects_discrete_problem(self, doubling_problem: Problem) -> None:
        """Test that sweeps need continuous time."""
        with pytest.raises(ValueError, match="continuous"):
            max_preserving_dt(doubling_problem, EulerMethod.FORWARD, [0.1])

    def test_rejects_bad_grids(self, diamond_problem: Problem) -> None:
        """Test empty and unsorted grids."""
        with pytest.raises(ValueError, match="empty"):
            max_preserving_dt(diamond_problem, EulerMethod.FORWARD, [])
        with pytest.raises(ValueError, match="sorted"):
            max_preserving_dt(diamond_problem, EulerMethod.FORWARD, [0.5, 0.1])


@pytest.mark.slow
class TestEulerBridgeProperties:
    """Sweeps over the invariant continuous ellipsoid and Lorenz examples."""

    @pytest.mark.parametrize("points", [8, 16, 32])
    def test_backward_keeps_disk(
        self, unit_disk: Ellipsoid, rotation: np.ndarray, points: int
    ) -> None:
        """Test backward Euler of the rotation for dt <= 0.5 / ||A||_F."""
        problem = Problem(a=rotation, time=TimeRegime.CONTINUOUS, region=unit_disk)
        bound = 0.5 / np.linalg.norm(rotation)
        grid = [dt for dt in default_dt_grid(rotation, points) if dt <= bound]
        assert grid
        assert max_preserving_dt(problem, EulerMethod.BACKWARD, grid).all_pass

    @pytest.mark.parametrize("points", [8, 16, 32])
    def test_backward_keeps_lorenz_cone(
        self, lorenz: LorenzCone, spiral: np.ndarray, points: int
    ) -> None:
        """Test backward Euler of the spiral for dt <= 0.5 / ||A||_F."""
        problem = Problem(a=spiral, time=TimeRegime.CONTINUOUS, region=lorenz)
        bound = 0.5 / np.linalg.norm(spiral)
        grid = [dt for dt in default_dt_grid(spiral, points) if dt <= bound]
        assert grid
        result = max_preserving_dt(problem, EulerMethod.BACKWARD, grid, max_workers=4)
        assert result.all_pass

    def test_forward_rotation_expands(self, unit_disk: Ellipsoid, rotation: np.ndarray) -> None:
        """Test that I + dt R fails at every dt with mu_min = 1 + dt^2."""
        problem = Problem(a=rotation, time=TimeRegime.CONTINUOUS, region=unit_disk)
        grid = [float(dt) for dt in np.geomspace(1e-3, 1.0, 12)]
        result = max_preserving_dt(problem, EulerMethod.FORWARD, grid)
        assert result.largest_passing_dt is None
        for row in result.table:
            assert row.verdict is Verdict.NOT_INVARIANT
            assert row.diagnostics["mu_min"] == pytest.approx(1.0 + row.dt**2, abs=1e-9)
