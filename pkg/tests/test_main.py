"""Tests for the CLI entry point."""

from __future__ import annotations

import json
import logging
import os
from collections.abc import Iterator
from pathlib import Path
from unittest.mock import patch

import pytest

from invkit import __version__
from invkit.__main__ import (
    EXIT_INCONCLUSIVE,
    EXIT_INPUT_ERROR,
    EXIT_INVARIANT,
    EXIT_NOT_INVARIANT,
    VERDICT_EXIT_CODES,
    configure_logging,
    create_parser,
    main,
    validate_config,
)
from invkit.conditions import Verdict

FIXTURES = Path(__file__).parent / "fixtures"


def run_main(argv: list[str]) -> int:
    """Run main and return its exit code."""
    with pytest.raises(SystemExit) as exc_info:
        main(argv)
    code = exc_info.value.code
    assert isinstance(code, int)
    return code


def fixture(name: str) -> str:
    """Path of a problem file as a CLI argument."""
    return str(FIXTURES / name)


# ============================================================================
# Fixtures
# ============================================================================


@pytest.fixture(autouse=True)
def clean_env() -> Iterator[None]:
    """Run every test without INVKIT_* overrides."""
    env = {k: v for k, v in os.environ.items() if not k.startswith("INVKIT_")}
    with patch.dict(os.environ, env, clear=True):
        yield


class TestCreateParser:
    """Tests for argument parser creation."""

    def test_parser_has_version(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the --version flag."""
        with pytest.raises(SystemExit) as exc_info:
            create_parser().parse_args(["--version"])
        assert exc_info.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_check_defaults(self) -> None:
        """Test the common options of a subcommand."""
        args = create_parser().parse_args(["check", "p.json"])
        assert args.command == "check"
        assert args.problem == Path("p.json")
        assert args.report is None
        assert args.tol_psd is None
        assert args.seed is None

    def test_tolerance_flags(self) -> None:
        """Test the tolerance overrides."""
        args = create_parser().parse_args(
            ["check", "p.json", "--tol-psd", "1e-8", "--tol-lp", "1e-9", "--seed", "4"]
        )
        assert args.tol_psd == 1e-8
        assert args.tol_lp == 1e-9
        assert args.seed == 4

    def test_simulate_point(self) -> None:
        """Test that --x0 is parsed as comma-separated floats."""
        args = create_parser().parse_args(["simulate", "p.json", "--x0", "1,-0.5"])
        assert args.x0 == [1.0, -0.5]

    def test_euler_defaults(self) -> None:
        """Test the Euler subcommand defaults."""
        args = create_parser().parse_args(["euler", "p.json"])
        assert args.method == "backward"
        assert args.grid == 32
        assert args.dt is None

    def test_usage_error_exit_code(self) -> None:
        """Test that usage errors exit with the input-error code."""
        with pytest.raises(SystemExit) as exc_info:
            create_parser().parse_args(["prove", "p.json"])
        assert exc_info.value.code == EXIT_INPUT_ERROR

    def test_bad_point(self) -> None:
        """Test that a malformed --x0 is a usage error."""
        with pytest.raises(SystemExit) as exc_info:
            create_parser().parse_args(["simulate", "p.json", "--x0", "a,b"])
        assert exc_info.value.code == EXIT_INPUT_ERROR

    @pytest.mark.parametrize(
        "argv",
        [
            ["check", "p.json", "--tol-psd", "-1"],
            ["check", "p.json", "--tol-lp", "nan"],
            ["check", "p.json", "--seed", "-3"],
            ["simulate", "p.json", "--steps", "-1"],
            ["simulate", "p.json", "--dt", "0"],
            ["witness", "p.json", "--samples", "0"],
            ["euler", "p.json", "--dt", "-0.1"],
            ["euler", "p.json", "--grid", "0"],
            ["diagnose", "p.json", "--k-max", "1"],
        ],
    )
    def test_out_of_range_option(self, argv: list[str]) -> None:
        """Test that out-of-range numeric options are usage errors."""
        with pytest.raises(SystemExit) as exc_info:
            create_parser().parse_args(argv)
        assert exc_info.value.code == EXIT_INPUT_ERROR


class TestConfigureLogging:
    """Tests for logging configuration."""

    def test_configure_logging_info(self) -> None:
        """Test the INFO level."""
        configure_logging("INFO")
        assert logging.getLogger().level == logging.INFO

    def test_configure_logging_debug(self) -> None:
        """Test the DEBUG level."""
        configure_logging("DEBUG")
        assert logging.getLogger().level == logging.DEBUG


class TestValidateConfig:
    """Tests for configuration validation."""

    def test_validate_config_success(self) -> None:
        """Test that the defaults validate."""
        settings = validate_config()
        assert settings is not None
        assert settings.seed == 0

    def test_validate_config_failure(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that an out-of-range value is reported."""
        with patch.dict(os.environ, {"INVKIT_MAX_WORKERS": "0"}):
            assert validate_config() is None
        assert "Configuration validation failed" in capsys.readouterr().err

    def test_main_exits_on_bad_config(self) -> None:
        """Test that main refuses an invalid environment."""
        with patch.dict(os.environ, {"INVKIT_SEED": "-1"}):
            assert run_main(["check", fixture("diamond_contracting.json")]) == EXIT_INPUT_ERROR


class TestExitCodes:
    """Tests for the verdict to exit-code mapping."""

    def test_mapping(self) -> None:
        """Test that each verdict has its own code."""
        assert VERDICT_EXIT_CODES == {
            Verdict.INVARIANT: EXIT_INVARIANT,
            Verdict.NOT_INVARIANT: EXIT_NOT_INVARIANT,
            Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
        }


@pytest.mark.integration
class TestCommands:
    """End-to-end runs of the subcommands on the fixture problems."""

    def test_check_invariant(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a certified problem."""
        assert run_main(["check", fixture("diamond_contracting.json")]) == EXIT_INVARIANT
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "Invariant"
        assert report["certificate"]["kind"] == "od_nonneg_matrix"

    def test_check_not_invariant(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a refuted problem."""
        assert run_main(["check", fixture("square_doubling.json")]) == EXIT_NOT_INVARIANT
        report = json.loads(capsys.readouterr().out)
        assert report["seed"] == 3
        assert report["witness"]["step"] == 1

    def test_check_seed_flag(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that --seed overrides the file."""
        argv = ["check", fixture("square_doubling.json"), "--seed", "11"]
        assert run_main(argv) == EXIT_NOT_INVARIANT
        assert json.loads(capsys.readouterr().out)["seed"] == 11

    def test_tolerance_flag_overrides_file(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that --tol-psd replaces the file's zero band."""
        problem = fixture("disk_rotation.json")
        assert run_main(["check", problem]) == EXIT_INVARIANT
        capsys.readouterr()
        assert run_main(["check", problem, "--tol-psd", "1e-8"]) == EXIT_INCONCLUSIVE
        report = json.loads(capsys.readouterr().out)
        assert report["tolerances"]["psd_tol"] == 1e-8

    def test_invalid_problem(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that a set violating its definition is an input error."""
        assert run_main(["check", fixture("disk_indefinite.json")]) == EXIT_INPUT_ERROR
        assert "invkit: error: $.set" in capsys.readouterr().err

    def test_missing_file(self, tmp_path: Path) -> None:
        """Test that an unreadable file is an input error."""
        assert run_main(["check", str(tmp_path / "absent.json")]) == EXIT_INPUT_ERROR

    def test_check_then_verify(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that a written report re-verifies from the files alone."""
        problem = fixture("diamond_contracting.json")
        report = tmp_path / "report.json"
        assert run_main(["check", problem, "--report", str(report)]) == EXIT_INVARIANT
        assert "Invariant (check_continuous_polyhedron)" in capsys.readouterr().out
        assert run_main(["verify", problem, "--report", str(report)]) == EXIT_INVARIANT
        assert json.loads(capsys.readouterr().out)["valid"] is True

    def test_verify_needs_report(self) -> None:
        """Test that verify without --report is an input error."""
        assert run_main(["verify", fixture("diamond_contracting.json")]) == EXIT_INPUT_ERROR

    def test_euler_needs_continuous(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that a steplength sweep of a discrete problem is an input error."""
        assert run_main(["euler", fixture("square_doubling.json")]) == EXIT_INPUT_ERROR
        assert "continuous-time" in capsys.readouterr().err

    def test_internal_error_propagates(self) -> None:
        """Test that a failure inside a checker is not reported as bad input."""
        with (
            patch("invkit.__main__.check_problem", side_effect=ValueError("boom")),
            pytest.raises(ValueError, match="boom"),
        ):
            main(["check", fixture("diamond_contracting.json")])

    def test_witness_from_checker(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that the checker's witness is preferred."""
        assert run_main(["witness", fixture("square_doubling.json")]) == EXIT_NOT_INVARIANT
        data = json.loads(capsys.readouterr().out)
        assert data["source"] == "checker"
        assert data["witness"]["slack"] > 0.0

    def test_witness_none_found(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that an invariant problem yields no oracle witness."""
        argv = ["witness", fixture("diamond_contracting.json"), "--samples", "20", "--steps", "10"]
        assert run_main(argv) == EXIT_INVARIANT
        data = json.loads(capsys.readouterr().out)
        assert data["source"] == "oracle"
        assert data["witness"] is None

    def test_simulate_csv(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the CSV trajectory of the doubling map."""
        argv = ["simulate", fixture("square_doubling.json"), "--x0", "1,0", "--steps", "2"]
        assert run_main(argv) == EXIT_INVARIANT
        assert capsys.readouterr().out == "t,x1,x2\n0.0,1.0,0.0\n1.0,2.0,0.0\n2.0,4.0,0.0\n"

    def test_simulate_wrong_dimension(self) -> None:
        """Test that x0 must match the problem dimension."""
        argv = ["simulate", fixture("square_doubling.json"), "--x0", "1,0,0"]
        assert run_main(argv) == EXIT_INPUT_ERROR

    def test_euler_single_dt(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test forward Euler at one steplength of a contracting flow."""
        argv = ["euler", fixture("diamond_contracting.json"), "--method", "forward", "--dt", "0.1"]
        assert run_main(argv) == EXIT_INVARIANT
        data = json.loads(capsys.readouterr().out)
        assert data["method"] == "forward"
        assert data["largest_passing_dt"] == 0.1
        assert len(data["table"]) == 1

    def test_diagnose_cone(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that cone diagnostics report both scalar intervals."""
        argv = ["diagnose", fixture("lorenz_spiral.json"), "--samples", "16"]
        assert run_main(argv) == EXIT_INVARIANT
        data = json.loads(capsys.readouterr().out)
        assert data["type"] == "lorenz_cone"
        assert {"mu_interval", "eta_interval", "boundary_flow", "nagumo"} <= data.keys()
