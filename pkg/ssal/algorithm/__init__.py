"""Outer loop, parameters and polishing."""

from .loop import IterateObserver, SolveError, run, update_multiplier
from .params import DEFAULT_OMEGA, SolverParams
from .polish import PolishInfeasibleError, polish
from .state import IterateState, SolveReport, TraceEntry

__all__ = [
    "DEFAULT_OMEGA",
    "IterateObserver",
    "IterateState",
    "PolishInfeasibleError",
    "SolveError",
    "SolveReport",
    "SolverParams",
    "TraceEntry",
    "polish",
    "run",
    "update_multiplier",
]
