"""Pytest configuration and fixtures."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from invkit.config import Tolerances
from invkit.numerics import FloatArray
from invkit.problem import Problem, TimeRegime
from invkit.sets import DoubleCone, Ellipsoid, HPolyhedron, LorenzCone, VPolyhedron

FIXTURES = Path(__file__).parent / "fixtures"

DIAMOND_G = [[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]]
SQUARE_G = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
PYRAMID_RAYS = [[1.0, 1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [-1.0, -1.0, 1.0]]
ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])
SPIRAL = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
CONE_Q = np.diag([1.0, 1.0, -1.0])


# =============================================================================
# Fixtures
# =============================================================================


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding the JSON problem files."""
    return FIXTURES


@pytest.fixture
def diamond() -> HPolyhedron:
    """The unit diamond |x| + |y| <= 1."""
    return HPolyhedron(g=np.array(DIAMOND_G), b=np.ones(4))


@pytest.fixture
def square() -> HPolyhedron:
    """The square max(|x|, |y|) <= 1."""
    return HPolyhedron(g=np.array(SQUARE_G), b=np.ones(4))


@pytest.fixture
def pyramid() -> VPolyhedron:
    """Cone over the square, generated by four rays."""
    return VPolyhedron.cone(PYRAMID_RAYS)


@pytest.fixture
def unit_disk() -> Ellipsoid:
    """The unit disk in the plane."""
    return Ellipsoid(q=np.eye(2))


@pytest.fixture
def lorenz() -> LorenzCone:
    """The ice-cream cone x^2 + y^2 <= z^2, z >= 0."""
    return LorenzCone(q=CONE_Q)


@pytest.fixture
def double_cone() -> DoubleCone:
    """Both nappes of x^2 + y^2 <= z^2."""
    return DoubleCone(q=CONE_Q)


@pytest.fixture
def strict() -> Tolerances:
    """Tolerances with a zero semidefiniteness band."""
    return Tolerances(psd_tol=0.0)


@pytest.fixture
def rotation() -> FloatArray:
    """Quarter-turn generator [[0, -1], [1, 0]]."""
    return ROTATION.copy()


@pytest.fixture
def spiral() -> FloatArray:
    """Outward spiral whose Lorenz cone is invariant with eta = 2."""
    return SPIRAL.copy()


@pytest.fixture
def diamond_problem(diamond: HPolyhedron) -> Problem:
    """Contracting flow x' = -x on the diamond."""
    return Problem(a=-np.eye(2), time=TimeRegime.CONTINUOUS, region=diamond)


@pytest.fixture
def disk_problem(unit_disk: Ellipsoid, rotation: FloatArray) -> Problem:
    """Rotation of the unit disk in continuous time."""
    return Problem(a=rotation, time=TimeRegime.CONTINUOUS, region=unit_disk)


@pytest.fixture
def doubling_problem(square: HPolyhedron) -> Problem:
    """The map x -> 2x on the square, which is not invariant."""
    return Problem(a=2.0 * np.eye(2), time=TimeRegime.DISCRETE, region=square, seed=7)
