"""Tests for configuration management."""

from __future__ import annotations

import os
from typing import TYPE_CHECKING
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from invkit.config import (
    DEFAULT_LP_TOL,
    DEFAULT_PSD_TOL,
    OracleSettings,
    Settings,
    ToleranceSettings,
    Tolerances,
    clear_settings_cache,
    get_settings,
)

if TYPE_CHECKING:
    from collections.abc import Iterator


@pytest.fixture(autouse=True)
def clear_cache() -> Iterator[None]:
    """Clear settings cache before and after each test."""
    clear_settings_cache()
    yield
    clear_settings_cache()


class TestTolerances:
    """Tests for the Tolerances record."""

    def test_defaults(self) -> None:
        """Test default thresholds."""
        tol = Tolerances()
        assert tol.psd_tol == DEFAULT_PSD_TOL
        assert tol.lp_tol == DEFAULT_LP_TOL

    def test_negative_value_raises(self) -> None:
        """Test that a negative tolerance is rejected."""
        with pytest.raises(ValueError, match="psd_tol must be nonnegative"):
            Tolerances(psd_tol=-1.0)

    def test_nan_raises(self) -> None:
        """Test that NaN is rejected."""
        with pytest.raises(ValueError, match="lp_tol"):
            Tolerances(lp_tol=float("nan"))

    def test_with_overrides_skips_none(self) -> None:
        """Test that None overrides keep the current value."""
        tol = Tolerances().with_overrides(psd_tol=0.0, lp_tol=None)
        assert tol.psd_tol == 0.0
        assert tol.lp_tol == DEFAULT_LP_TOL

    def test_with_no_overrides_returns_self(self) -> None:
        """Test that an empty override set returns the same object."""
        tol = Tolerances()
        assert tol.with_overrides(membership_tol=None) is tol

    def test_dict_round_trip_ignores_unknown_keys(self) -> None:
        """Test from_dict on a stored dictionary with extra keys."""
        data = {**Tolerances(psd_tol=1e-6).to_dict(), "unknown": 3.0}
        assert Tolerances.from_dict(data) == Tolerances(psd_tol=1e-6)


class TestToleranceSettings:
    """Tests for ToleranceSettings."""

    def test_defaults(self) -> None:
        """Test default values without environment."""
        with patch.dict(os.environ, {}, clear=True):
            tol = ToleranceSettings().to_tolerances()
            assert tol == Tolerances()

    def test_env_override(self) -> None:
        """Test INVKIT_TOL_* variables."""
        with patch.dict(os.environ, {"INVKIT_TOL_PSD": "1e-6", "INVKIT_TOL_LP": "1e-7"}):
            tol = ToleranceSettings().to_tolerances()
            assert tol.psd_tol == 1e-6
            assert tol.lp_tol == 1e-7

    def test_negative_env_value_raises(self) -> None:
        """Test that negative tolerances fail validation."""
        with (
            patch.dict(os.environ, {"INVKIT_TOL_MEMBERSHIP": "-1"}),
            pytest.raises(ValidationError),
        ):
            ToleranceSettings()

    def test_zero_exp_tol_raises(self) -> None:
        """Test that the exponential tolerance must be positive."""
        with patch.dict(os.environ, {"INVKIT_TOL_EXP": "0"}), pytest.raises(ValidationError):
            ToleranceSettings()


class TestOracleSettings:
    """Tests for OracleSettings."""

    def test_defaults(self) -> None:
        """Test default oracle budget."""
        with patch.dict(os.environ, {}, clear=True):
            oracle = OracleSettings()
            assert oracle.samples == 200
            assert oracle.steps == 50
            assert oracle.witness_budget == 256

    def test_custom_budget(self) -> None:
        """Test overriding the sample count."""
        with patch.dict(os.environ, {"INVKIT_ORACLE_SAMPLES": "17"}):
            assert OracleSettings().samples == 17

    def test_zero_samples_raises(self) -> None:
        """Test that the oracle needs at least one sample."""
        with patch.dict(os.environ, {"INVKIT_ORACLE_SAMPLES": "0"}), pytest.raises(ValidationError):
            OracleSettings()


class TestSettings:
    """Tests for main Settings class."""

    def test_default_log_level(self) -> None:
        """Test default log level is INFO."""
        with patch.dict(os.environ, {}, clear=True):
            settings = Settings()
            assert settings.log_level == "INFO"
            assert settings.max_workers == 1
            assert settings.seed == 0

    def test_custom_log_level(self) -> None:
        """Test custom log level."""
        with patch.dict(os.environ, {"INVKIT_LOG": "DEBUG"}):
            settings = Settings()
            assert settings.log_level == "DEBUG"

    def test_lower_case_log_level(self) -> None:
        """Test that lower-case level names are accepted."""
        with patch.dict(os.environ, {"INVKIT_LOG": "warning"}):
            settings = Settings()
            assert settings.log_level == "WARNING"

    def test_invalid_log_level_raises(self) -> None:
        """Test that invalid log level raises validation error."""
        with patch.dict(os.environ, {"INVKIT_LOG": "VERBOSE"}), pytest.raises(ValidationError):
            Settings()

    def test_max_workers_validation(self) -> None:
        """Test worker count bounds."""
        with patch.dict(os.environ, {"INVKIT_MAX_WORKERS": "0"}), pytest.raises(ValidationError):
            Settings()

    def test_nested_tolerances(self) -> None:
        """Test that nested groups read their own prefixes."""
        with patch.dict(os.environ, {"INVKIT_TOL_PSD": "0", "INVKIT_SEED": "11"}):
            settings = Settings()
            assert settings.tolerances.to_tolerances().psd_tol == 0.0
            assert settings.seed == 11


class TestGetSettings:
    """Tests for get_settings function."""

    def test_returns_same_instance(self) -> None:
        """Test that get_settings returns cached instance."""
        with patch.dict(os.environ, {}, clear=True):
            assert get_settings() is get_settings()

    def test_clear_cache_allows_reload(self) -> None:
        """Test that clearing cache allows reloading settings."""
        with patch.dict(os.environ, {"INVKIT_LOG": "INFO"}):
            first = get_settings()
        clear_settings_cache()
        with patch.dict(os.environ, {"INVKIT_LOG": "DEBUG"}):
            second = get_settings()
        assert first.log_level == "INFO"
        assert second.log_level == "DEBUG"
