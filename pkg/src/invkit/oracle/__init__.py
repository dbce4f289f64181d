"""Simulation oracle - trajectories, falsification and cross-validation."""

from invkit.oracle.models import (
    MAGNITUDE_CAP,
    CrossValidation,
    FalsificationWitness,
    NagumoReport,
    Trajectory,
    TrajectoryOverflowError,
)
from invkit.oracle.simulate import falsification_dt, falsify, propagators, simulate
from invkit.oracle.validation import cross_validate, nagumo_sample_check, replay_witness

__all__ = [
    "MAGNITUDE_CAP",
    "CrossValidation",
    "FalsificationWitness",
    "NagumoReport",
    "Trajectory",
    "TrajectoryOverflowError",
    "cross_validate",
    "falsification_dt",
    "falsify",
    "nagumo_sample_check",
    "propagators",
    "replay_witness",
    "simulate",
]
