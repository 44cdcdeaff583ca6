"""Bounded-variable revised simplex with classical and oracle-guided pivot rules."""

from __future__ import annotations

from .lp_model import BoundedStandardLP, GeneralLP, reformulate
from .simplex import SolveOutcome, SolverConfig, SolveStatus, make_state, solve, solve_with_basis

__all__ = [
    "BoundedStandardLP",
    "GeneralLP",
    "reformulate",
    "SolveOutcome",
    "SolverConfig",
    "SolveStatus",
    "make_state",
    "solve",
    "solve_with_basis",
]

__version__ = "0.1.0"
