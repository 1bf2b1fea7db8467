"""Outer-loop parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from ssal.inner import InnerSolverOpts
from ssal.model import ProblemSpec, Vector, as_vector

__all__ = ["DEFAULT_OMEGA", "SolverParams"]

DEFAULT_OMEGA = {"quadratic_form": 0.3, "least_squares": 1.0}


@dataclass(frozen=True, slots=True, eq=False)
class SolverParams:
    """Penalty ρ, multiplier step ω, stopping threshold ε on ‖x − y‖² and starting points."""

    rho: float = 1.0
    omega: float = 0.3
    epsilon: float = 1e-4
    max_outer: int = 500
    lambda0: Vector | None = None
    y0: Vector | None = None
    inner: InnerSolverOpts = field(default_factory=InnerSolverOpts)

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise ValueError(f"rho must be positive (got {self.rho})")
        if not 0 < self.omega <= 2:
            raise ValueError(f"omega must lie in (0, 2] (got {self.omega})")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be nonnegative (got {self.epsilon})")
        if self.max_outer < 0:
            raise ValueError(f"max_outer must be nonnegative (got {self.max_outer})")
        if self.lambda0 is not None:
            object.__setattr__(self, "lambda0", as_vector(self.lambda0, "lambda0"))
        if self.y0 is not None:
            object.__setattr__(self, "y0", as_vector(self.y0, "y0"))

    @classmethod
    def for_objective(cls, kind: str, **overrides: Any) -> SolverParams:
        """Defaults for an objective kind: ω = 0.3 for quadratic forms, 1.0 for least squares."""

        values: dict[str, Any] = {"omega": DEFAULT_OMEGA.get(kind, 0.3)}
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def initial_multiplier(self, spec: ProblemSpec) -> Vector:
        if self.lambda0 is None:
            return np.zeros(spec.n)
        return np.array(spec.check_point(self.lambda0, "lambda0"))

    def initial_y(self, spec: ProblemSpec) -> Vector:
        if self.y0 is None:
            return np.zeros(spec.n)
        y0: ArrayLike = spec.check_point(self.y0, "y0")
        if not spec.y_set.contains(y0):
            raise ValueError("y0 must belong to the semicontinuous set Y")
        return np.array(y0, dtype=np.float64)
