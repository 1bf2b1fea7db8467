"""Tuning knobs and failure types for the convex x-subproblem solver."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

__all__ = [
    "EmptyIntersectionError",
    "InnerSolverError",
    "InnerSolverOpts",
    "RiskInfeasibleError",
    "RiskPenalty",
    "StepRule",
]


class InnerSolverError(RuntimeError):
    """Raised when a projection or projected-gradient solve fails to converge."""

    def __init__(self, message: str, *, residual: float, iterations: int) -> None:
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class EmptyIntersectionError(InnerSolverError):
    """Raised when the blocks of X appear to have no common point."""


class RiskInfeasibleError(InnerSolverError):
    """Raised when the multiplier loop cannot reach xᵀDx ≤ σ₀."""


@dataclass(frozen=True, slots=True)
class StepRule:
    init_step: float = 1.0
    shrink: float = 0.5
    armijo_c: float = 1e-4


@dataclass(frozen=True, slots=True)
class RiskPenalty:
    init_multiplier: float = 0.0
    penalty: float = 10.0
    outer_iters: int = 50
    feas_tol: float = 1e-8


@dataclass(frozen=True, slots=True)
class InnerSolverOpts:
    """Options for projected gradient, Dykstra corrections and the risk multiplier loop."""

    max_iters: int = 10_000
    grad_tol: float = 1e-8
    step_rule: StepRule = field(default_factory=StepRule)
    dykstra_iters: int = 500
    dykstra_tol: float = 1e-10
    risk_penalty: RiskPenalty = field(default_factory=RiskPenalty)
    # residual still accepted when max_iters runs out; 0 makes the cap fatal
    cap_tol: float = 0.0

    def __post_init__(self) -> None:
        tolerances = {
            "grad_tol": self.grad_tol,
            "dykstra_tol": self.dykstra_tol,
            "risk_penalty.feas_tol": self.risk_penalty.feas_tol,
            "step_rule.init_step": self.step_rule.init_step,
            "step_rule.armijo_c": self.step_rule.armijo_c,
            "risk_penalty.penalty": self.risk_penalty.penalty,
        }
        for name, value in tolerances.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive (got {value})")
        if not 0.0 < self.step_rule.shrink < 1.0:
            raise ValueError(f"step_rule.shrink must lie in (0, 1) (got {self.step_rule.shrink})")
        if self.max_iters < 1 or self.dykstra_iters < 1 or self.risk_penalty.outer_iters < 1:
            raise ValueError("iteration caps must be at least 1")
        if self.risk_penalty.init_multiplier < 0:
            raise ValueError("risk_penalty.init_multiplier must be nonnegative")
        if self.cap_tol < 0.0:
            raise ValueError(f"cap_tol must be nonnegative (got {self.cap_tol})")

    def tightened(self, grad_tol: float) -> InnerSolverOpts:
        """Aim for grad_tol, settling for the current tolerance at the iteration cap."""

        return replace(self, grad_tol=grad_tol, cap_tol=max(self.cap_tol, self.grad_tol))
