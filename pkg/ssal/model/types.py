"""Problem data model: objectives, the convex set X and the semicontinuous set Y."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "Box",
    "ConvexSetX",
    "DimensionError",
    "Halfspace",
    "LeastSquares",
    "Matrix",
    "Objective",
    "ProblemSpec",
    "QuadRisk",
    "QuadraticForm",
    "SemicontinuousSet",
    "Vector",
    "as_matrix",
    "as_vector",
]

Vector: TypeAlias = NDArray[np.float64]
Matrix: TypeAlias = NDArray[np.float64]

_PSD_FLOOR = -1e-10

logger = logging.getLogger("ssal.model")


class DimensionError(ValueError):
    """Raised when vectors or matrices disagree on the problem dimension."""


def as_vector(values: ArrayLike, name: str, n: int | None = None) -> Vector:
    """Return a read-only float64 copy of ``values`` checked to be 1-D (and of length n)."""

    array = np.array(values, dtype=np.float64)
    if array.ndim != 1:
        raise DimensionError(f"{name} must be a vector (got shape {array.shape})")
    if n is not None and array.shape[0] != n:
        raise DimensionError(f"{name} has length {array.shape[0]}, expected {n}")
    array.setflags(write=False)
    return array


def as_matrix(
    values: ArrayLike, name: str, shape: tuple[int | None, int | None] = (None, None)
) -> Matrix:
    array = np.array(values, dtype=np.float64)
    if array.ndim != 2:
        raise DimensionError(f"{name} must be a matrix (got shape {array.shape})")
    for axis, expected in enumerate(shape):
        if expected is not None and array.shape[axis] != expected:
            raise DimensionError(
                f"{name} has shape {array.shape}, expected {expected} along axis {axis}"
            )
    array.setflags(write=False)
    return array


@dataclass(frozen=True, slots=True, eq=False)
class SemicontinuousSet:
    """The nonconvex set Y = {‖y‖₀ ≤ K, yᵢ ∈ {0} ∪ [aᵢ, bᵢ]}."""

    a: Vector
    b: Vector
    K: int

    def __post_init__(self) -> None:
        a = as_vector(self.a, "a")
        b = as_vector(self.b, "b", a.shape[0])
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not np.all(a > 0):
            raise ValueError("semicontinuous lower levels a must be strictly positive")
        if not np.all(a <= b):
            raise ValueError("semicontinuous levels must satisfy a <= b")
        if not 0 < int(self.K) <= a.shape[0]:
            raise ValueError(f"cardinality budget K={self.K} must lie in [1, {a.shape[0]}]")
        object.__setattr__(self, "K", int(self.K))

    @property
    def n(self) -> int:
        return int(self.a.shape[0])

    def contains(self, y: ArrayLike, tol: float = 0.0) -> bool:
        """Return True when y has at most K nonzeros, each within [aᵢ − tol, bᵢ + tol]."""

        vector = as_vector(y, "y", self.n)
        support = vector != 0.0
        if int(support.sum()) > self.K:
            return False
        inside = (vector >= self.a - tol) & (vector <= self.b + tol)
        return bool(np.all(inside[support]))


@dataclass(frozen=True, slots=True, eq=False)
class QuadraticForm:
    """f(x) = xᵀMx with M symmetric positive semidefinite (M = Q + D for portfolios)."""

    M: Matrix
    kind: Literal["quadratic_form"] = "quadratic_form"

    def __post_init__(self) -> None:
        matrix = as_matrix(self.M, "M")
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f"M must be square (got shape {matrix.shape})")
        scale = max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0
        if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12 * scale):
            raise ValueError("QuadraticForm matrix must be symmetric")
        object.__setattr__(self, "M", matrix)
        if matrix.size:
            floor = float(np.linalg.eigvalsh(matrix)[0])
            if floor < _PSD_FLOOR:
                logger.warning("model.indefinite", extra={"min_eigenvalue": floor})

    @property
    def n(self) -> int:
        return int(self.M.shape[0])

    def value(self, x: Vector) -> float:
        return float(x @ self.M @ x)

    def gradient(self, x: Vector) -> Vector:
        return 2.0 * (self.M @ x)

    def hessian_apply(self, v: Vector) -> Vector:
        return 2.0 * (self.M @ v)


@dataclass(frozen=True, slots=True, eq=False)
class LeastSquares:
    """f(x) = ½‖Ax − bobs‖²."""

    A: Matrix
    bobs: Vector
    kind: Literal["least_squares"] = "least_squares"

    def __post_init__(self) -> None:
        matrix = as_matrix(self.A, "A")
        object.__setattr__(self, "A", matrix)
        object.__setattr__(self, "bobs", as_vector(self.bobs, "bobs", matrix.shape[0]))

    @property
    def n(self) -> int:
        return int(self.A.shape[1])

    def value(self, x: Vector) -> float:
        residual = self.A @ x - self.bobs
        return 0.5 * float(residual @ residual)

    def gradient(self, x: Vector) -> Vector:
        return self.A.T @ (self.A @ x - self.bobs)

    def hessian_apply(self, v: Vector) -> Vector:
        return self.A.T @ (self.A @ v)


Objective: TypeAlias = QuadraticForm | LeastSquares


@dataclass(frozen=True, slots=True, eq=False)
class Box:
    """lower ≤ x ≤ upper; entries may be infinite."""

    lower: Vector
    upper: Vector

    def __post_init__(self) -> None:
        lower = as_vector(self.lower, "box.lower")
        upper = as_vector(self.upper, "box.upper", lower.shape[0])
        if np.any(lower > upper):
            raise ValueError("box lower bounds must not exceed upper bounds")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, n: int, lower: float, upper: float) -> Box:
        return cls(np.full(n, lower), np.full(n, upper))

    @property
    def n(self) -> int:
        return int(self.lower.shape[0])


@dataclass(frozen=True, slots=True, eq=False)
class Halfspace:
    """μᵀx ≥ ρ₀ (the expected-return constraint)."""

    mu: Vector
    rho0: float

    def __post_init__(self) -> None:
        mu = as_vector(self.mu, "return_halfspace.mu")
        if not np.any(mu):
            raise ValueError("return_halfspace.mu must be nonzero")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "rho0", float(self.rho0))


@dataclass(frozen=True, slots=True, eq=False)
class QuadRisk:
    """xᵀDx ≤ σ₀ with D diagonal, stored as its diagonal ``d``."""

    d: Vector
    sigma0: float

    def __post_init__(self) -> None:
        d = as_vector(self.d, "quad_risk.D")
        if np.any(d < 0):
            raise ValueError("quad_risk.D must have nonnegative diagonal entries")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "sigma0", float(self.sigma0))

    @property
    def D(self) -> Matrix:
        return np.diag(self.d)

    def value(self, x: Vector) -> float:
        return float(x @ (self.d * x))


@dataclass(frozen=True, slots=True, eq=False)
class ConvexSetX:
    """Descriptor of the closed convex set X as an intersection of optional blocks."""

    box: Box | None = None
    simplex: bool = False
    return_halfspace: Halfspace | None = None
    quad_risk: QuadRisk | None = None

    def __post_init__(self) -> None:
        if self.box is None and not self.simplex and self.return_halfspace is None:
            if self.quad_risk is None:
                raise ValueError("ConvexSetX needs at least one block")
        dims = {
            int(block_dim)
            for block_dim in (
                self.box.n if self.box else None,
                self.return_halfspace.mu.shape[0] if self.return_halfspace else None,
                self.quad_risk.d.shape[0] if self.quad_risk else None,
            )
            if block_dim is not None
        }
        if len(dims) > 1:
            raise DimensionError(f"ConvexSetX blocks disagree on dimension: {sorted(dims)}")

    @property
    def n(self) -> int | None:
        if self.box is not None:
            return self.box.n
        if self.return_halfspace is not None:
            return int(self.return_halfspace.mu.shape[0])
        if self.quad_risk is not None:
            return int(self.quad_risk.d.shape[0])
        return None

    @property
    def is_polytope(self) -> bool:
        return self.quad_risk is None

    def without_risk(self) -> ConvexSetX | None:
        """The polytope part of X, or None when quad_risk is the only block."""

        if self.box is None and not self.simplex and self.return_halfspace is None:
            return None
        return ConvexSetX(
            box=self.box, simplex=self.simplex, return_halfspace=self.return_halfspace
        )

    def violation(self, x: Vector) -> float:
        """Largest constraint violation of x over every present block (0 when feasible)."""

        worst = 0.0
        if self.box is not None:
            below = np.max(self.box.lower - x, initial=0.0)
            above = np.max(x - self.box.upper, initial=0.0)
            worst = max(worst, float(below), float(above))
        if self.simplex:
            worst = max(worst, abs(float(np.sum(x)) - 1.0))
        if self.return_halfspace is not None:
            gap = self.return_halfspace.rho0 - float(self.return_halfspace.mu @ x)
            worst = max(worst, gap)
        if self.quad_risk is not None:
            worst = max(worst, self.quad_risk.value(x) - self.quad_risk.sigma0)
        return worst

    def restricted(self, support: Sequence[int], y_set: SemicontinuousSet) -> ConvexSetX:
        """X ∩ {xᵢ = 0 off the support, aᵢ ≤ xᵢ ≤ bᵢ on it}, folded into the box block."""

        n = y_set.n
        lower = np.zeros(n)
        upper = np.zeros(n)
        index = np.asarray(list(support), dtype=np.intp)
        lower[index] = y_set.a[index]
        upper[index] = y_set.b[index]
        if self.box is not None:
            lower[index] = np.maximum(lower[index], self.box.lower[index])
            upper[index] = np.minimum(upper[index], self.box.upper[index])
            off = np.setdiff1d(np.arange(n), index)
            if np.any(self.box.lower[off] > 0.0) or np.any(self.box.upper[off] < 0.0):
                raise ValueError("box excludes zero on a coordinate outside the support")
        if np.any(lower > upper):
            raise ValueError("semicontinuous levels and box do not intersect on the support")
        return ConvexSetX(
            box=Box(lower, upper),
            simplex=self.simplex,
            return_halfspace=self.return_halfspace,
            quad_risk=self.quad_risk,
        )


@dataclass(frozen=True, slots=True, eq=False)
class ProblemSpec:
    """Problem (P): minimize f(x) over X ∩ Y."""

    objective: Objective
    x_set: ConvexSetX
    y_set: SemicontinuousSet
    n: int

    def __post_init__(self) -> None:
        n = int(self.n)
        object.__setattr__(self, "n", n)
        if self.objective.n != n:
            raise DimensionError(f"objective has dimension {self.objective.n}, expected {n}")
        if self.x_set.n is not None and self.x_set.n != n:
            raise DimensionError(f"x_set has dimension {self.x_set.n}, expected {n}")
        if self.y_set.n != n:
            raise DimensionError(f"y_set has dimension {self.y_set.n}, expected {n}")

    def check_point(self, x: ArrayLike, name: str = "x") -> Vector:
        return as_vector(x, name, self.n)
