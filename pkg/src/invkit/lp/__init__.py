"""LP feasibility engine - phase-1 simplex with Farkas certificates."""

from invkit.lp.feasibility import (
    certifies_infeasibility,
    maximize_linear,
    optimize,
    solve_farkas,
    solve_feasibility,
)
from invkit.lp.models import (
    Alternative,
    FarkasOutcome,
    Feasible,
    FeasOutcome,
    Infeasible,
    LinearProgramFeas,
    LPShapeError,
    Optimum,
    OptimizeOutcome,
    Primal,
    Unbounded,
    VarSign,
)
from invkit.lp.simplex import LPError, NumericalBreakdownError, SimplexTableau

__all__ = [
    "Alternative",
    "FarkasOutcome",
    "FeasOutcome",
    "Feasible",
    "Infeasible",
    "LPError",
    "LPShapeError",
    "LinearProgramFeas",
    "NumericalBreakdownError",
    "Optimum",
    "OptimizeOutcome",
    "Primal",
    "SimplexTableau",
    "Unbounded",
    "VarSign",
    "certifies_infeasibility",
    "maximize_linear",
    "optimize",
    "solve_farkas",
    "solve_feasibility",
]
