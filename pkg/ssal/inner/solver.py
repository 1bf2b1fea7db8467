"""Projected-gradient solver for the convex x-subproblem over X."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ssal.model import (
    ConvexSetX,
    ProblemSpec,
    QuadRisk,
    Vector,
    augmented_lagrangian,
    lagrangian_gradient,
    lipschitz_estimate,
)

from .options import InnerSolverError, InnerSolverOpts, RiskInfeasibleError
from .projections import project_polytope

__all__ = [
    "InnerResult",
    "XSubproblemSolver",
    "minimize_over",
    "projected_gradient",
    "solve_x_subproblem",
]

logger = logging.getLogger("ssal.inner")

_WARM_START_TOL = 1e-12
_MAX_BACKTRACKS = 60
_BB_SPAN = 1e10

ValueFn = Callable[[Vector], float]
GradientFn = Callable[[Vector], Vector]
ProjectFn = Callable[[Vector], Vector]


@dataclass(frozen=True, slots=True, eq=False)
class InnerResult:
    x: Vector
    value: float
    residual: float
    iterations: int
    risk_multiplier: float = 0.0


def projected_gradient(
    value: ValueFn,
    gradient: GradientFn,
    project: ProjectFn,
    x0: Vector,
    step0: float,
    opts: InnerSolverOpts,
) -> InnerResult:
    """Monotone projected gradient from a feasible x0.

    Each iteration tries a Barzilai–Borwein step and backtracks it until the Armijo
    condition f(x⁺) ≤ f(x) + c·∇f(x)ᵀ(x⁺ − x) holds, so accepted iterates never increase
    the objective. Stops once ‖x − Π(x − ∇f(x))‖∞ ≤ grad_tol.
    """

    rule = opts.step_rule
    x = x0
    fx = value(x)
    g = gradient(x)
    step = step0
    prev_x: Vector | None = None
    prev_g: Vector | None = None
    residual = math.inf
    for iteration in range(opts.max_iters):
        residual = float(np.max(np.abs(x - project(x - g)), initial=0.0))
        if residual <= opts.grad_tol:
            return InnerResult(x=x, value=fx, residual=residual, iterations=iteration)
        if prev_x is not None and prev_g is not None:
            s = x - prev_x
            curvature = float(s @ (g - prev_g))
            step = float(s @ s) / curvature if curvature > 0.0 else step0
            step = min(max(step, step0 / _BB_SPAN), step0 * _BB_SPAN)
        trial = step
        for _ in range(_MAX_BACKTRACKS):
            candidate = project(x - trial * g)
            f_candidate = value(candidate)
            if f_candidate <= fx + rule.armijo_c * float(g @ (candidate - x)):
                break
            trial *= rule.shrink
        else:
            # no representable decrease left along the projected arc
            logger.debug("inner.stall", extra={"residual": residual, "iterations": iteration})
            return InnerResult(x=x, value=fx, residual=residual, iterations=iteration)
        prev_x, prev_g = x, g
        x, fx = candidate, f_candidate
        g = gradient(x)
    if opts.cap_tol > 0.0:
        residual = float(np.max(np.abs(x - project(x - g)), initial=0.0))
    if residual <= opts.cap_tol:
        logger.debug("inner.cap", extra={"residual": residual, "iterations": opts.max_iters})
        return InnerResult(x=x, value=fx, residual=residual, iterations=opts.max_iters)
    raise InnerSolverError(
        "projected gradient reached its iteration cap",
        residual=residual,
        iterations=opts.max_iters,
    )


class XSubproblemSolver:
    """Minimizes L_ρ(x, y, λ) = f(x) + λᵀ(y − x) + (ρ/2)‖y − x‖² over X.

    One instance serves every outer iteration of a run: the curvature estimate that seeds
    the step size is computed once.
    """

    def __init__(
        self,
        spec: ProblemSpec,
        rho: float,
        opts: InnerSolverOpts | None = None,
        x_set: ConvexSetX | None = None,
    ) -> None:
        if not rho >= 0:
            raise ValueError(f"rho must be nonnegative (got {rho})")
        self.spec = spec
        self.rho = float(rho)
        self.opts = opts or InnerSolverOpts()
        self.x_set = x_set if x_set is not None else spec.x_set
        self._polytope = self.x_set.without_risk()
        curvature = lipschitz_estimate(spec.objective) + self.rho
        init_step = self.opts.step_rule.init_step
        self.step0 = init_step / curvature if curvature > 0.0 else init_step

    def project(self, x: Vector) -> Vector:
        if self._polytope is None:
            return np.array(x, dtype=np.float64)
        return project_polytope(x, self._polytope, self.opts)

    def start_point(self, x0: ArrayLike | None, y: Vector) -> Vector:
        """Keep a warm start that is already feasible; project anything else."""

        point = np.array(self.spec.check_point(y if x0 is None else x0, "x0"))
        if self._polytope is not None and self._polytope.violation(point) > _WARM_START_TOL:
            return self.project(point)
        return point

    def solve(self, y: ArrayLike, lam: ArrayLike, x0: ArrayLike | None = None) -> InnerResult:
        target = self.spec.check_point(y, "y")
        multiplier = self.spec.check_point(lam, "lambda")
        spec = self.spec
        rho = self.rho

        def value(x: Vector) -> float:
            return augmented_lagrangian(spec, x, target, multiplier, rho)

        def gradient(x: Vector) -> Vector:
            return lagrangian_gradient(spec, x, target, multiplier, rho)

        start = self.start_point(x0, target)
        if self.x_set.quad_risk is None:
            result = projected_gradient(value, gradient, self.project, start, self.step0, self.opts)
        else:
            result = self._solve_with_risk(value, gradient, start)
        logger.debug(
            "inner.solve",
            extra={
                "iterations": result.iterations,
                "residual": result.residual,
                "rho": rho,
                "risk_multiplier": result.risk_multiplier,
            },
        )
        return result

    def _solve_with_risk(self, value: ValueFn, gradient: GradientFn, start: Vector) -> InnerResult:
        """Augmented-Lagrangian loop on g(x) = xᵀDx ≤ σ₀ around the polytope solve."""

        risk = self.x_set.quad_risk
        assert risk is not None
        settings = self.opts.risk_penalty
        penalty = settings.penalty
        mu = settings.init_multiplier
        x = start
        total = 0
        gap = math.inf
        for _ in range(settings.outer_iters):
            penalized_value, penalized_gradient = _risk_penalized(
                value, gradient, risk, mu, penalty
            )
            result = projected_gradient(
                penalized_value, penalized_gradient, self.project, x, self.step0, self.opts
            )
            x = result.x
            total += result.iterations
            gap = risk.value(x) - risk.sigma0
            mu = max(0.0, mu + penalty * gap)
            if gap <= settings.feas_tol and (mu == 0.0 or abs(gap) <= settings.feas_tol):
                return InnerResult(
                    x=x,
                    value=value(x),
                    residual=result.residual,
                    iterations=total,
                    risk_multiplier=mu,
                )
        raise RiskInfeasibleError(
            "risk multiplier loop did not reach xᵀDx ≤ σ₀", residual=gap, iterations=total
        )


def _risk_penalized(
    value: ValueFn, gradient: GradientFn, risk: QuadRisk, mu: float, penalty: float
) -> tuple[ValueFn, GradientFn]:
    def shift(p: Vector) -> float:
        return max(0.0, risk.value(p) - risk.sigma0 + mu / penalty)

    def penalized_value(p: Vector) -> float:
        return value(p) + 0.5 * penalty * shift(p) ** 2

    def penalized_gradient(p: Vector) -> Vector:
        return gradient(p) + (2.0 * penalty * shift(p)) * (risk.d * p)

    return penalized_value, penalized_gradient


def solve_x_subproblem(
    spec: ProblemSpec,
    y: ArrayLike,
    lam: ArrayLike,
    rho: float,
    opts: InnerSolverOpts | None = None,
    x0: ArrayLike | None = None,
) -> Vector:
    return XSubproblemSolver(spec, rho, opts).solve(y, lam, x0).x


def minimize_over(
    spec: ProblemSpec,
    x_set: ConvexSetX,
    opts: InnerSolverOpts | None = None,
    x0: ArrayLike | None = None,
) -> InnerResult:
    """Minimize the bare objective f over a convex set (ρ = 0, λ = 0)."""

    zeros = np.zeros(spec.n)
    solver = XSubproblemSolver(spec, 0.0, opts, x_set=x_set)
    return solver.solve(zeros, zeros, x0)
