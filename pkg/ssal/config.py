"""Solver settings shared by the CLI and library callers."""

from __future__ import annotations

import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from ssal.algorithm import DEFAULT_OMEGA, SolverParams
from ssal.inner import InnerSolverOpts, RiskPenalty, StepRule

__all__ = ["CONFIG_ENV_VAR", "DEFAULT_CONFIG_PATH", "SolverSettings", "load_settings"]

CONFIG_ENV_VAR = "SSAL_CONFIG"
DEFAULT_CONFIG_PATH = Path("config") / "solver.toml"


@dataclass(slots=True)
class SolverSettings:
    """Outer-loop defaults plus the inner solver options (parsed from TOML)."""

    rho: float = 1.0
    omega_quadratic: float = DEFAULT_OMEGA["quadratic_form"]
    omega_least_squares: float = DEFAULT_OMEGA["least_squares"]
    epsilon: float = 1e-4
    max_outer: int = 500
    inner: InnerSolverOpts = field(default_factory=InnerSolverOpts)
    omega: float | None = None
    source: Path | None = None

    @classmethod
    def from_toml(cls, path: Path) -> SolverSettings:
        data = tomllib.loads(Path(path).read_text("utf-8"))
        solver = data.get("solver", {})
        omega = solver.get("omega", {})
        inner = data.get("inner", {})
        defaults = cls()
        return cls(
            rho=float(solver.get("rho", defaults.rho)),
            omega_quadratic=float(omega.get("quadratic_form", defaults.omega_quadratic)),
            omega_least_squares=float(omega.get("least_squares", defaults.omega_least_squares)),
            epsilon=float(solver.get("epsilon", defaults.epsilon)),
            max_outer=int(solver.get("max_outer", defaults.max_outer)),
            inner=_inner_from_table(inner),
            source=Path(path),
        )

    def merged(
        self,
        *,
        rho: float | None = None,
        omega: float | None = None,
        epsilon: float | None = None,
        max_outer: int | None = None,
    ) -> SolverSettings:
        """Return a copy that applies CLI overrides; None keeps the current value."""

        return replace(
            self,
            rho=self.rho if rho is None else rho,
            omega=self.omega if omega is None else omega,
            epsilon=self.epsilon if epsilon is None else epsilon,
            max_outer=self.max_outer if max_outer is None else max_outer,
        )

    def omega_for(self, objective_kind: str) -> float:
        if self.omega is not None:
            return self.omega
        if objective_kind == "least_squares":
            return self.omega_least_squares
        return self.omega_quadratic

    def to_params(self, objective_kind: str) -> SolverParams:
        return SolverParams(
            rho=self.rho,
            omega=self.omega_for(objective_kind),
            epsilon=self.epsilon,
            max_outer=self.max_outer,
            inner=self.inner,
        )

    def echo(self, objective_kind: str) -> dict[str, Any]:
        """The parameters actually used for a solve, for embedding in reports."""

        return {
            "rho": self.rho,
            "omega": self.omega_for(objective_kind),
            "epsilon": self.epsilon,
            "max_outer": self.max_outer,
            "config": str(self.source) if self.source else None,
        }


def _inner_from_table(table: dict[str, Any]) -> InnerSolverOpts:
    defaults = InnerSolverOpts()
    step = table.get("step_rule", {})
    risk = table.get("risk_penalty", {})
    return InnerSolverOpts(
        max_iters=int(table.get("max_iters", defaults.max_iters)),
        grad_tol=float(table.get("grad_tol", defaults.grad_tol)),
        step_rule=StepRule(
            init_step=float(step.get("init_step", defaults.step_rule.init_step)),
            shrink=float(step.get("shrink", defaults.step_rule.shrink)),
            armijo_c=float(step.get("armijo_c", defaults.step_rule.armijo_c)),
        ),
        dykstra_iters=int(table.get("dykstra_iters", defaults.dykstra_iters)),
        dykstra_tol=float(table.get("dykstra_tol", defaults.dykstra_tol)),
        risk_penalty=RiskPenalty(
            init_multiplier=float(
                risk.get("init_multiplier", defaults.risk_penalty.init_multiplier)
            ),
            penalty=float(risk.get("penalty", defaults.risk_penalty.penalty)),
            outer_iters=int(risk.get("outer_iters", defaults.risk_penalty.outer_iters)),
            feas_tol=float(risk.get("feas_tol", defaults.risk_penalty.feas_tol)),
        ),
    )


def load_settings(path: Path | None = None) -> SolverSettings:
    """Explicit path, then $SSAL_CONFIG, then ./config/solver.toml, then built-in defaults."""

    if path is not None:
        return SolverSettings.from_toml(path)
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        return SolverSettings.from_toml(Path(env_path))
    if DEFAULT_CONFIG_PATH.exists():
        return SolverSettings.from_toml(DEFAULT_CONFIG_PATH)
    return SolverSettings()
