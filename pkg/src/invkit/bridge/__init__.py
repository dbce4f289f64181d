"""Euler bridge - discretization and steplength sweeps."""

from invkit.bridge.euler import default_dt_grid, discretize, max_preserving_dt
from invkit.bridge.models import DtSweepResult, DtVerdict, EulerMethod, EulerSpec

__all__ = [
    "DtSweepResult",
    "DtVerdict",
    "EulerMethod",
    "EulerSpec",
    "default_dt_grid",
    "discretize",
    "max_preserving_dt",
]
