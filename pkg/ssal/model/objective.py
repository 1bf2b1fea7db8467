"""Objective, gradient and augmented Lagrangian evaluation."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from .types import Objective, ProblemSpec, Vector

__all__ = [
    "augmented_lagrangian",
    "eval_gradient",
    "eval_objective",
    "lagrangian_gradient",
    "lipschitz_estimate",
]

_POWER_STEPS = 20


def eval_objective(spec: ProblemSpec, x: ArrayLike) -> float:
    """Return xᵀMx or ½‖Ax − bobs‖² depending on the objective kind."""

    return spec.objective.value(spec.check_point(x))


def eval_gradient(spec: ProblemSpec, x: ArrayLike) -> Vector:
    """Return 2Mx or Aᵀ(Ax − bobs) depending on the objective kind."""

    return spec.objective.gradient(spec.check_point(x))


def augmented_lagrangian(
    spec: ProblemSpec, x: Vector, y: Vector, lam: Vector, rho: float
) -> float:
    """L_ρ(x, y, λ) = f(x) + λᵀ(y − x) + (ρ/2)‖y − x‖²."""

    gap = y - x
    return spec.objective.value(x) + float(lam @ gap) + 0.5 * rho * float(gap @ gap)


def lagrangian_gradient(
    spec: ProblemSpec, x: Vector, y: Vector, lam: Vector, rho: float
) -> Vector:
    """∇ₓL_ρ(x, y, λ) = ∇f(x) − λ − ρ(y − x)."""

    return spec.objective.gradient(x) - lam - rho * (y - x)


def lipschitz_estimate(objective: Objective, steps: int = _POWER_STEPS) -> float:
    """Largest eigenvalue of the Hessian of f by power iteration from a fixed start."""

    n = objective.n
    v = np.full(n, 1.0 / np.sqrt(n))
    estimate = 0.0
    norm = 0.0
    for _ in range(steps):
        w = objective.hessian_apply(v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        estimate = float(v @ w)
        v = w / norm
    # the Rayleigh quotient underestimates; the last image norm is a closer upper guess
    return max(estimate, norm)
