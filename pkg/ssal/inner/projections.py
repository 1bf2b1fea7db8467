"""Euclidean projections onto the blocks of X and onto their intersection."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike

from ssal.model import ConvexSetX, DimensionError, Halfspace, Vector, as_vector

from .options import EmptyIntersectionError, InnerSolverOpts

__all__ = [
    "FEASIBILITY_TOL",
    "project_box",
    "project_budget",
    "project_halfspace",
    "project_polytope",
]

FEASIBILITY_TOL = 1e-8

Projection = Callable[[Vector], Vector]


def project_box(x: ArrayLike, lower: ArrayLike, upper: ArrayLike) -> Vector:
    point = np.asarray(x, dtype=np.float64)
    lo = np.broadcast_to(np.asarray(lower, dtype=np.float64), point.shape)
    hi = np.broadcast_to(np.asarray(upper, dtype=np.float64), point.shape)
    if point.ndim != 1:
        raise DimensionError(f"x must be a vector (got shape {point.shape})")
    if np.any(lo > hi):
        raise ValueError("lower bounds must not exceed upper bounds")
    return np.clip(point, lo, hi)


def project_halfspace(x: Vector, halfspace: Halfspace) -> Vector:
    gap = halfspace.rho0 - float(halfspace.mu @ x)
    if gap <= 0.0:
        return x
    return x + (gap / float(halfspace.mu @ halfspace.mu)) * halfspace.mu


def project_budget(
    x: Vector, lower: Vector | None = None, upper: Vector | None = None, total: float = 1.0
) -> Vector:
    """Exact projection onto {eᵀp = total} ∩ [lower, upper].

    The solution is clip(x − t·e, lower, upper) where t zeroes the nonincreasing,
    piecewise-linear excess φ(t) = Σ clip(xᵢ − t) − total. A binary search over the
    breakpoints brackets t and the linear piece is then solved in closed form.
    """

    n = x.shape[0]
    if lower is None or upper is None:
        return x - (float(x.sum()) - total) / n
    slack = 1e-12 * max(1.0, abs(total))
    if float(lower.sum()) > total + slack or float(upper.sum()) < total - slack:
        raise EmptyIntersectionError(
            "box and budget hyperplane do not intersect",
            residual=max(float(lower.sum()) - total, total - float(upper.sum())),
            iterations=0,
        )

    def excess(t: float) -> float:
        return float(np.clip(x - t, lower, upper).sum()) - total

    breakpoints = np.concatenate([x - upper, x - lower])
    breakpoints = np.unique(breakpoints[np.isfinite(breakpoints)])
    lo, hi = 0, breakpoints.shape[0] - 1
    idx = -1
    while lo <= hi:
        mid = (lo + hi) // 2
        if excess(float(breakpoints[mid])) >= 0.0:
            idx = mid
            lo = mid + 1
        else:
            hi = mid - 1
    if breakpoints.shape[0] == 0:
        pivot = 0.0
    elif idx == -1:
        pivot = float(breakpoints[0]) - 1.0
    elif idx == breakpoints.shape[0] - 1:
        pivot = float(breakpoints[idx]) + 1.0
    else:
        pivot = 0.5 * float(breakpoints[idx] + breakpoints[idx + 1])
    shifted = x - pivot
    free = (lower < shifted) & (shifted < upper)
    if not np.any(free):
        t = float(breakpoints[idx]) if idx >= 0 else pivot
    else:
        fixed = float(np.clip(shifted[~free], lower[~free], upper[~free]).sum())
        t = (float(x[free].sum()) + fixed - total) / int(free.sum())
    return np.clip(x - t, lower, upper)


def _blocks(x_set: ConvexSetX) -> list[Projection]:
    blocks: list[Projection] = []
    box = x_set.box
    if x_set.simplex:
        lower = box.lower if box is not None else None
        upper = box.upper if box is not None else None
        blocks.append(lambda p: project_budget(p, lower, upper))
    elif box is not None:
        blocks.append(lambda p: np.clip(p, box.lower, box.upper))
    halfspace = x_set.return_halfspace
    if halfspace is not None:
        blocks.append(lambda p: project_halfspace(p, halfspace))
    return blocks


def project_polytope(x: ArrayLike, X: ConvexSetX, opts: InnerSolverOpts) -> Vector:
    """Project onto box ∩ budget ∩ return-halfspace with Dykstra corrections.

    Box and budget hyperplane form one exactly projectable block; Dykstra cycles it with
    the halfspace until iterates and corrections settle within ``dykstra_tol`` at a
    point of X.
    """

    if X.quad_risk is not None:
        raise ValueError("project_polytope does not handle the quad_risk block")
    point = as_vector(x, "x", X.n).copy()
    blocks = _blocks(X)
    if not blocks:
        return point
    if len(blocks) == 1:
        result = blocks[0](point)
    else:
        result = _dykstra(point, blocks, X, opts)
    violation = X.violation(result)
    if violation > FEASIBILITY_TOL:
        raise EmptyIntersectionError(
            "projection residual stagnates above tolerance; X may be empty",
            residual=violation,
            iterations=opts.dykstra_iters,
        )
    return result


def _dykstra(
    point: Vector, blocks: list[Projection], X: ConvexSetX, opts: InnerSolverOpts
) -> Vector:
    # Stops only at a feasible fixed point: iterate and corrections both settled.
    current = point
    corrections = [np.zeros_like(point) for _ in blocks]
    for _ in range(opts.dykstra_iters):
        previous = current
        drift = 0.0
        for i, project in enumerate(blocks):
            shifted = current + corrections[i]
            current = project(shifted)
            updated = shifted - current
            drift = max(drift, float(np.max(np.abs(updated - corrections[i]))))
            corrections[i] = updated
        change = max(float(np.max(np.abs(current - previous))), drift)
        if change <= opts.dykstra_tol and X.violation(current) <= FEASIBILITY_TOL:
            return current
    violation = X.violation(current)
    if violation > FEASIBILITY_TOL:
        raise EmptyIntersectionError(
            "Dykstra iterates stay outside X; the intersection may be empty",
            residual=violation,
            iterations=opts.dykstra_iters,
        )
    return current
