"""Convex x-subproblem: projections onto X and the projected-gradient solver."""

from .options import (
    EmptyIntersectionError,
    InnerSolverError,
    InnerSolverOpts,
    RiskInfeasibleError,
    RiskPenalty,
    StepRule,
)
from .projections import (
    FEASIBILITY_TOL,
    project_box,
    project_budget,
    project_halfspace,
    project_polytope,
)
from .solver import (
    InnerResult,
    XSubproblemSolver,
    minimize_over,
    projected_gradient,
    solve_x_subproblem,
)

__all__ = [
    "FEASIBILITY_TOL",
    "EmptyIntersectionError",
    "InnerResult",
    "InnerSolverError",
    "InnerSolverOpts",
    "RiskInfeasibleError",
    "RiskPenalty",
    "StepRule",
    "XSubproblemSolver",
    "minimize_over",
    "project_box",
    "project_budget",
    "project_halfspace",
    "project_polytope",
    "projected_gradient",
    "solve_x_subproblem",
]
