"""Configuration management with Pydantic Settings.

This module provides the numeric tolerances that govern every verdict
together with the oracle budget and logging configuration, loaded from
environment variables (and an optional .env file) at startup.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from functools import lru_cache
from typing import Any, Literal

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_EIG_TOL = 1e-10
DEFAULT_PSD_TOL = 1e-8
DEFAULT_SINGULAR_TOL = 1e-12
DEFAULT_EXP_TOL = 1e-12
DEFAULT_LP_TOL = 1e-9
DEFAULT_PIVOT_TOL = 1e-11
DEFAULT_MEMBERSHIP_TOL = 1e-7
DEFAULT_MU_SEARCH_TOL = 1e-10
DEFAULT_INERTIA_TOL = 1e-9

DEFAULT_ORACLE_SAMPLES = 200
DEFAULT_ORACLE_STEPS = 50
DEFAULT_WITNESS_BUDGET = 256


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds governing every verdict.

    All bands are relative: a quantity derived from a matrix M is compared
    against ``tol * (1 + ||M||_F)``.

    Attributes:
        eig_tol: Symmetry and convergence tolerance of the eigen-solver.
        psd_tol: Band around zero for semidefiniteness decisions.
        singular_tol: Smallest admissible pivot relative to ||M||_F.
        exp_tol: Target relative error of the matrix exponential.
        lp_tol: Feasibility slack of LP solutions and certificates.
        pivot_tol: Smallest admissible simplex pivot.
        membership_tol: Band separating Inside, Boundary and Outside.
        mu_search_tol: Interval width at which scalar searches stop.
        inertia_tol: Zero band used when counting eigenvalue signs.
    """

    eig_tol: float = DEFAULT_EIG_TOL
    psd_tol: float = DEFAULT_PSD_TOL
    singular_tol: float = DEFAULT_SINGULAR_TOL
    exp_tol: float = DEFAULT_EXP_TOL
    lp_tol: float = DEFAULT_LP_TOL
    pivot_tol: float = DEFAULT_PIVOT_TOL
    membership_tol: float = DEFAULT_MEMBERSHIP_TOL
    mu_search_tol: float = DEFAULT_MU_SEARCH_TOL
    inertia_tol: float = DEFAULT_INERTIA_TOL

    def __post_init__(self) -> None:
        for item in fields(self):
            value = getattr(self, item.name)
            if not value >= 0.0:
                raise ValueError(f"{item.name} must be nonnegative, got {value}")

    def with_overrides(self, **overrides: float | None) -> Tolerances:
        """Return a copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes) if changes else self

    def to_dict(self) -> dict[str, float]:
        """Serialize to a plain dictionary."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Tolerances:
        """Create from a dictionary, ignoring unknown keys."""
        known = {item.name for item in fields(cls)}
        return cls(**{key: float(value) for key, value in data.items() if key in known})


class ToleranceSettings(BaseSettings):
    """Tolerance overrides read from INVKIT_TOL_* variables."""

    model_config = SettingsConfigDict(
        env_prefix="INVKIT_TOL_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    eig: float = Field(
        default=DEFAULT_EIG_TOL,
        alias="INVKIT_TOL_EIG",
        description="Eigen-solver symmetry and convergence tolerance",
        ge=0.0,
    )
    psd: float = Field(
        default=DEFAULT_PSD_TOL,
        alias="INVKIT_TOL_PSD",
        description="Semidefiniteness band",
        ge=0.0,
    )
    singular: float = Field(
        default=DEFAULT_SINGULAR_TOL,
        alias="INVKIT_TOL_SINGULAR",
        description="Relative pivot threshold for solves and inversion",
        ge=0.0,
    )
    exp: float = Field(
        default=DEFAULT_EXP_TOL,
        alias="INVKIT_TOL_EXP",
        description="Matrix exponential target accuracy",
        gt=0.0,
    )
    lp: float = Field(
        default=DEFAULT_LP_TOL,
        alias="INVKIT_TOL_LP",
        description="LP feasibility slack",
        ge=0.0,
    )
    pivot: float = Field(
        default=DEFAULT_PIVOT_TOL,
        alias="INVKIT_TOL_PIVOT",
        description="Smallest admissible simplex pivot",
        gt=0.0,
    )
    membership: float = Field(
        default=DEFAULT_MEMBERSHIP_TOL,
        alias="INVKIT_TOL_MEMBERSHIP",
        description="Membership classification band",
        ge=0.0,
    )
    mu_search: float = Field(
        default=DEFAULT_MU_SEARCH_TOL,
        alias="INVKIT_TOL_MU_SEARCH",
        description="Stopping width of scalar LMI searches",
        gt=0.0,
    )

    def to_tolerances(self) -> Tolerances:
        """Build the Tolerances record used by the checkers."""
        return Tolerances(
            eig_tol=self.eig,
            psd_tol=self.psd,
            singular_tol=self.singular,
            exp_tol=self.exp,
            lp_tol=self.lp,
            pivot_tol=self.pivot,
            membership_tol=self.membership,
            mu_search_tol=self.mu_search,
        )


class OracleSettings(BaseSettings):
    """Simulation oracle budget."""

    model_config = SettingsConfigDict(
        env_prefix="INVKIT_ORACLE_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    samples: int = Field(
        default=DEFAULT_ORACLE_SAMPLES,
        alias="INVKIT_ORACLE_SAMPLES",
        description="Number of sampled initial states",
        ge=1,
    )
    steps: int = Field(
        default=DEFAULT_ORACLE_STEPS,
        alias="INVKIT_ORACLE_STEPS",
        description="Number of simulated steps per sample",
        ge=1,
    )
    witness_budget: int = Field(
        default=DEFAULT_WITNESS_BUDGET,
        alias="INVKIT_ORACLE_WITNESS_BUDGET",
        description="Samples spent on best-effort cone witnesses",
        ge=0,
    )


class Settings(BaseSettings):
    """Main application settings.

    Loads configuration from environment variables with support for
    .env files via python-dotenv.

    Example:
        ```python
        from invkit.config import get_settings

        settings = get_settings()
        print(settings.tolerances.psd)
        print(settings.log_level)
        ```
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Nested configuration groups
    tolerances: ToleranceSettings = Field(default_factory=ToleranceSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)

    # Application settings
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO",
        alias="INVKIT_LOG",
        description="Logging level",
    )
    max_workers: int = Field(
        default=1,
        alias="INVKIT_MAX_WORKERS",
        description="Worker threads for independent LP rows, grid points and samples",
        ge=1,
        le=64,
    )
    seed: int = Field(
        default=0,
        alias="INVKIT_SEED",
        description="Default seed for every randomized operation",
        ge=0,
    )

    @model_validator(mode="before")
    @classmethod
    def normalize_log_level(cls, data: Any) -> Any:
        """Accept lower-case level names such as INVKIT_LOG=debug."""
        if isinstance(data, dict):
            for key in ("INVKIT_LOG", "log_level"):
                if isinstance(data.get(key), str):
                    data[key] = data[key].upper()
        return data


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get the application settings singleton.

    Uses LRU cache to ensure settings are loaded only once and
    reused across the application.

    Returns:
        The Settings instance.

    Raises:
        ValidationError: If an environment variable has an invalid value.
    """
    return Settings()


def clear_settings_cache() -> None:
    """Clear the settings cache.

    Useful for testing when you need to reload settings with
    different environment variables.
    """
    get_settings.cache_clear()
