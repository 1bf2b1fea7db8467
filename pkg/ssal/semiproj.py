"""Exact Euclidean projection onto the sparse semicontinuous set Y.

The projection of w onto Y = {‖y‖₀ ≤ K, yᵢ ∈ {0} ∪ [aᵢ, bᵢ]} separates per coordinate
into a zero branch (cost qᵢ = wᵢ²) and an active branch (cost rᵢ of clamping wᵢ into
[aᵢ, bᵢ]). Choosing which coordinates activate is a 0/1 knapsack with unit weights:
activate the K smallest nonpositive entries of v = r − q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ssal.model import DimensionError, SemicontinuousSet, Vector, as_vector

__all__ = [
    "BranchCosts",
    "SupportSelection",
    "branch_costs",
    "project_semicard",
    "projection_distance",
    "select_support",
]


@dataclass(frozen=True, slots=True, eq=False)
class BranchCosts:
    """Per-coordinate costs of the zero and active branches for target w."""

    q: Vector
    r: Vector
    y_on: Vector
    w: Vector

    @property
    def v(self) -> Vector:
        return self.r - self.q


@dataclass(frozen=True, slots=True, eq=False)
class SupportSelection:
    z: NDArray[np.int8]
    v: Vector
    order: NDArray[np.intp]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.z))


def branch_costs(w: ArrayLike, Y: SemicontinuousSet) -> BranchCosts:
    target = as_vector(w, "w")
    if target.shape[0] != Y.n:
        raise DimensionError(f"w has length {target.shape[0]}, expected {Y.n}")
    y_on = np.minimum(Y.b, np.maximum(target, Y.a))
    return BranchCosts(q=target**2, r=(y_on - target) ** 2, y_on=y_on, w=target)


def select_support(costs: BranchCosts, K: int) -> SupportSelection:
    """Solve min Σ vᵢzᵢ s.t. eᵀz ≤ K, z ∈ {0,1}ⁿ.

    Indices are ranked by v ascending with a stable sort, so ties go to the lower index;
    entries with vᵢ = 0 inside the first K ranks are kept.
    """

    if K < 0:
        raise ValueError(f"K must be nonnegative (got {K})")
    v = costs.v
    order = np.argsort(v, kind="stable")
    leading = order[:K]
    z = np.zeros(v.shape[0], dtype=np.int8)
    z[leading[v[leading] <= 0.0]] = 1
    return SupportSelection(z=z, v=v, order=order)


def project_semicard(w: ArrayLike, Y: SemicontinuousSet) -> tuple[Vector, NDArray[np.int8]]:
    """Return (y, z) with y the global minimizer of ‖y − w‖² over Y and z its indicator."""

    costs = branch_costs(w, Y)
    selection = select_support(costs, Y.K)
    y = selection.z * costs.y_on
    return y, selection.z


def projection_distance(w: ArrayLike, Y: SemicontinuousSet) -> float:
    """Optimal value Σqᵢ + Σ vᵢzᵢ of the projection problem."""

    costs = branch_costs(w, Y)
    selection = select_support(costs, Y.K)
    return float(costs.q.sum() + selection.v @ selection.z)
