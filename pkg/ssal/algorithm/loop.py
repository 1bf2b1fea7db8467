"""The splitting augmented Lagrangian outer loop."""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable, Iterable

import numpy as np
from numpy.typing import ArrayLike

from ssal.inner import InnerSolverError, XSubproblemSolver
from ssal.log import TRACE
from ssal.model import ProblemSpec, Vector, eval_objective
from ssal.semiproj import project_semicard
from ssal.stationarity import FeasibilityError, stationarity_residual

from .params import SolverParams
from .polish import PolishInfeasibleError, polish
from .state import IterateState, SolveReport, TraceEntry

__all__ = ["IterateObserver", "SolveError", "run", "update_multiplier"]

logger = logging.getLogger("ssal.algorithm")

IterateObserver = Callable[[IterateState], None]


class SolveError(RuntimeError):
    """Raised when an x-subproblem fails inside the outer loop."""


def update_multiplier(
    lam: ArrayLike, y: ArrayLike, x: ArrayLike, omega: float, rho: float
) -> Vector:
    """λ⁺ = λ + ωρ(y − x), componentwise."""

    lam_arr = np.asarray(lam, dtype=np.float64)
    y_arr = np.asarray(y, dtype=np.float64)
    x_arr = np.asarray(x, dtype=np.float64)
    if not lam_arr.shape == y_arr.shape == x_arr.shape:
        raise ValueError(
            f"lambda, y and x must share a shape (got {lam_arr.shape}, {y_arr.shape}, "
            f"{x_arr.shape})"
        )
    return lam_arr + (omega * rho) * (y_arr - x_arr)


def _primal_residual(x: Vector, y: Vector) -> float:
    gap = x - y
    return float(gap @ gap)


def run(
    spec: ProblemSpec,
    params: SolverParams | None = None,
    observers: Iterable[IterateObserver] = (),
) -> SolveReport:
    """Run the outer loop until ‖x − y‖² ≤ ε or max_outer iterations, then polish.

    Observers see the state after the initial x-solve (k = 0) and after every iteration.
    Hitting max_outer is reported through ``converged=False``, never raised.
    """

    params = params or SolverParams.for_objective(spec.objective.kind)
    listeners = list(observers)
    started = time.perf_counter()
    rho, omega = params.rho, params.omega
    solver = XSubproblemSolver(spec, rho, params.inner)
    lam = params.initial_multiplier(spec)
    y = params.initial_y(spec)
    z = (y != 0.0).astype(np.int8)
    logger.info(
        "ssal.start",
        extra={
            "n": spec.n,
            "K": spec.y_set.K,
            "rho": rho,
            "omega": omega,
            "epsilon": params.epsilon,
            "max_outer": params.max_outer,
        },
    )

    def solve_x(target: Vector, multiplier: Vector, warm: Vector | None, k: int) -> Vector:
        try:
            return solver.solve(target, multiplier, warm).x
        except InnerSolverError as exc:
            raise SolveError(f"x-subproblem failed at outer iteration {k}: {exc}") from exc

    x = solve_x(y, lam, None, 0)
    k = 0
    residual = _primal_residual(x, y)
    trace = [TraceEntry(k=0, primal_residual=residual, objective=eval_objective(spec, x))]
    max_multiplier_norm = float(np.linalg.norm(lam))
    state = IterateState(k=0, x=x, y=y, z=z, lam=lam, primal_residual=residual)
    for listener in listeners:
        listener(state)

    while residual > params.epsilon and k < params.max_outer:
        w = x - lam / rho
        y, z = project_semicard(w, spec.y_set)
        x = solve_x(y, lam, x, k + 1)
        lam = update_multiplier(lam, y, x, omega, rho)
        k += 1
        residual = _primal_residual(x, y)
        objective = eval_objective(spec, x)
        max_multiplier_norm = max(max_multiplier_norm, float(np.linalg.norm(lam)))
        trace.append(TraceEntry(k=k, primal_residual=residual, objective=objective))
        logger.log(
            TRACE,
            "ssal.iteration",
            extra={
                "k": k,
                "primal_residual": residual,
                "objective": objective,
                "support_size": int(z.sum()),
            },
        )
        state = IterateState(k=k, x=x, y=y, z=z, lam=lam, primal_residual=residual)
        for listener in listeners:
            listener(state)

    converged = residual <= params.epsilon
    polish_error: str | None = None
    try:
        x_polished, objective_polished = polish(spec, z, params.inner, x0=y)
        certificate = stationarity_residual(spec, x_polished)
        stationarity = certificate.residual
    except (PolishInfeasibleError, InnerSolverError) as exc:
        polish_error = str(exc)
        x_polished, objective_polished, stationarity = y.copy(), math.nan, math.nan
    except FeasibilityError as exc:
        polish_error = str(exc)
        stationarity = math.nan

    report = SolveReport(
        x_final=x,
        y_final=y,
        z_final=z,
        x_polished=x_polished,
        objective_x=eval_objective(spec, x),
        objective_y=eval_objective(spec, y),
        objective_polished=objective_polished,
        outer_iterations=k,
        primal_residual_final=residual,
        stationarity_residual=stationarity,
        converged=converged,
        wall_time=time.perf_counter() - started,
        lambda_final=lam,
        max_multiplier_norm=max_multiplier_norm,
        per_iteration_trace=trace,
        polish_error=polish_error,
    )
    logger.info(
        "ssal.finish",
        extra={
            "converged": converged,
            "outer_iterations": k,
            "primal_residual": residual,
            "objective_polished": objective_polished,
            "wall_time": report.wall_time,
        },
    )
    return report
