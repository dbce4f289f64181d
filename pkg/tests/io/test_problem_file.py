"""Tests for problem files."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from invkit.config import Tolerances
from invkit.io import (
    ParseError,
    ProblemFileError,
    ProblemValidationError,
    SchemaError,
    load_problem,
    parse_problem,
    problem_to_dict,
    serialize_problem,
)
from invkit.problem import TimeRegime
from invkit.sets import HPolyhedron, LorenzCone, SetKind

ELLIPSE = {"type": "ellipsoid", "Q": [[1.0, 0.0], [0.0, 1.0]]}


def document(**overrides: object) -> str:
    """A small continuous ellipsoid problem with fields replaced."""
    data: dict[str, object] = {
        "system": {"A": [[0.0, -1.0], [1.0, 0.0]], "time": "continuous"},
        "set": ELLIPSE,
    }
    data.update(overrides)
    return json.dumps(data)


class TestLoadProblem:
    """Tests for reading the fixture files."""

    def test_diamond(self, fixtures_dir: Path) -> None:
        """Test an H-polyhedron problem."""
        problem = load_problem(fixtures_dir / "diamond_contracting.json")
        assert isinstance(problem.region, HPolyhedron)
        assert problem.time is TimeRegime.CONTINUOUS
        assert np.array_equal(problem.a, -np.eye(2))

    def test_tolerance_override(self, fixtures_dir: Path) -> None:
        """Test that the file's tolerances override the defaults."""
        problem = load_problem(fixtures_dir / "disk_rotation.json")
        assert problem.tolerances.psd_tol == 0.0
        assert problem.tolerances.lp_tol == Tolerances().lp_tol

    def test_default_seed(self, fixtures_dir: Path) -> None:
        """Test that a file without a seed takes the default."""
        problem = load_problem(fixtures_dir / "lorenz_spiral.json", default_seed=5)
        assert isinstance(problem.region, LorenzCone)
        assert problem.seed == 5

    def test_file_seed_wins(self, fixtures_dir: Path) -> None:
        """Test that a seed in the file is kept."""
        assert load_problem(fixtures_dir / "square_doubling.json", default_seed=5).seed == 3

    def test_v_cone(self, fixtures_dir: Path) -> None:
        """Test that rays are read one per row."""
        problem = load_problem(fixtures_dir / "pyramid_identity.json")
        assert problem.region.kind is SetKind.V_CONE
        assert problem.dim == 3

    def test_invalid_set(self, fixtures_dir: Path) -> None:
        """Test that an indefinite ellipsoid fails validation."""
        with pytest.raises(ProblemValidationError) as excinfo:
            load_problem(fixtures_dir / "disk_indefinite.json")
        assert excinfo.value.path == "$.set"
        assert "positive definite" in excinfo.value.reason


class TestParseErrors:
    """Tests for malformed documents."""

    def test_not_json(self) -> None:
        """Test that broken JSON is a parse error."""
        with pytest.raises(ParseError) as excinfo:
            parse_problem("{not json")
        assert excinfo.value.path == "$"
        assert str(excinfo.value).startswith("$: line 1")

    def test_unknown_set_type(self) -> None:
        """Test that an unknown type is a schema error."""
        with pytest.raises(SchemaError) as excinfo:
            parse_problem(document(set={"type": "circle", "r": 1.0}))
        assert excinfo.value.path.startswith("$.set")

    def test_missing_system(self) -> None:
        """Test that the system object is required."""
        with pytest.raises(SchemaError) as excinfo:
            parse_problem(json.dumps({"set": ELLIPSE}))
        assert excinfo.value.path == "$.system"

    def test_ragged_matrix(self) -> None:
        """Test that matrix rows must have equal length."""
        with pytest.raises(SchemaError, match="equal length"):
            parse_problem(document(set={"type": "ellipsoid", "Q": [[1.0, 0.0], [1.0]]}))

    def test_non_finite_entry(self) -> None:
        """Test that NaN entries are rejected."""
        text = document().replace("-1.0", "NaN", 1)
        with pytest.raises(SchemaError):
            parse_problem(text)

    def test_dimension_mismatch(self) -> None:
        """Test that A must match the set dimension."""
        with pytest.raises(SchemaError) as excinfo:
            parse_problem(document(system={"A": np.eye(3).tolist(), "time": "discrete"}))
        assert excinfo.value.path == "$.system.A"

    def test_unknown_time(self) -> None:
        """Test that the time regime is an enumeration."""
        with pytest.raises(SchemaError):
            parse_problem(document(system={"A": [[1.0, 0.0], [0.0, 1.0]], "time": "hybrid"}))

    def test_negative_seed(self) -> None:
        """Test that seeds are nonnegative."""
        with pytest.raises(SchemaError) as excinfo:
            parse_problem(document(seed=-1))
        assert excinfo.value.path == "$.seed"

    def test_errors_share_base(self) -> None:
        """Test that every file error is a ProblemFileError."""
        with pytest.raises(ProblemFileError):
            parse_problem("[]")


class TestSerializeProblem:
    """Tests for writing problems back out."""

    def test_round_trip(self, fixtures_dir: Path) -> None:
        """Test that a serialized problem parses to the same data."""
        problem = load_problem(fixtures_dir / "pyramid_identity.json")
        again = parse_problem(serialize_problem(problem))
        assert problem_to_dict(again) == problem_to_dict(problem)

    def test_h_cone_form(self) -> None:
        """Test that cones drop their zero right-hand side."""
        problem = parse_problem(
            document(set={"type": "h_cone", "G": [[-1.0, 0.0], [0.0, -1.0]]})
        )
        data = problem_to_dict(problem)
        assert data["set"] == {"type": "h_cone", "G": [[-1.0, 0.0], [0.0, -1.0]]}
        assert data["system"]["time"] == "continuous"
