"""Per-iteration state and the final solve report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ssal.model import Vector

__all__ = ["IterateState", "SolveReport", "TraceEntry"]


@dataclass(frozen=True, slots=True, eq=False)
class IterateState:
    """(x^k, y^k, z^k, λ^k) after iteration k; k = 0 is the state after the initial x-solve."""

    k: int
    x: Vector
    y: Vector
    z: NDArray[np.int8]
    lam: Vector
    primal_residual: float


@dataclass(frozen=True, slots=True)
class TraceEntry:
    k: int
    primal_residual: float
    objective: float


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


@dataclass(slots=True, eq=False)
class SolveReport:
    x_final: Vector
    y_final: Vector
    z_final: NDArray[np.int8]
    x_polished: Vector
    objective_x: float
    objective_y: float
    objective_polished: float
    outer_iterations: int
    primal_residual_final: float
    stationarity_residual: float
    converged: bool
    wall_time: float
    lambda_final: Vector
    max_multiplier_norm: float
    per_iteration_trace: list[TraceEntry] = field(default_factory=list)
    polish_error: str | None = None

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.z_final))

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready payload; NaN values become null."""

        return {
            "converged": self.converged,
            "outer_iterations": self.outer_iterations,
            "primal_residual_final": self.primal_residual_final,
            "objective_x": self.objective_x,
            "objective_y": self.objective_y,
            "objective_polished": _finite_or_none(self.objective_polished),
            "stationarity_residual": _finite_or_none(self.stationarity_residual),
            "wall_time": self.wall_time,
            "polish_error": self.polish_error,
            "support": list(self.support),
            "x_final": self.x_final.tolist(),
            "y_final": self.y_final.tolist(),
            "z_final": self.z_final.tolist(),
            "x_polished": self.x_polished.tolist(),
            "lambda_final": self.lambda_final.tolist(),
            "max_multiplier_norm": self.max_multiplier_norm,
            "per_iteration_trace": [
                {
                    "k": entry.k,
                    "primal_residual": entry.primal_residual,
                    "objective": entry.objective,
                }
                for entry in self.per_iteration_trace
            ],
        }
