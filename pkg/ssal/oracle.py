"""Exhaustive support enumeration: the exact global optimum of (P) on small instances."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import lsq_linear

from ssal.inner import EmptyIntersectionError, InnerSolverOpts, RiskInfeasibleError, minimize_over
from ssal.log import TRACE
from ssal.model import (
    Box,
    ConvexSetX,
    LeastSquares,
    ProblemSpec,
    SemicontinuousSet,
    Vector,
    eval_objective,
)
from ssal.semiproj import branch_costs

__all__ = [
    "MAX_ORACLE_N",
    "ORACLE_GRAD_TOL",
    "GlobalInfeasibleError",
    "OracleResult",
    "SizeCapError",
    "enumerate_supports",
    "global_solve",
    "projection_oracle",
    "projection_spec",
]

logger = logging.getLogger("ssal.oracle")

MAX_ORACLE_N = 24
ORACLE_GRAD_TOL = 1e-10


class SizeCapError(ValueError):
    """Raised when an instance is too large to enumerate."""


class GlobalInfeasibleError(RuntimeError):
    """Raised when no support admits a point of X ∩ Y."""


@dataclass(frozen=True, slots=True, eq=False)
class OracleResult:
    x_star: Vector
    support: tuple[int, ...]
    objective: float
    supports_examined: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "x_star": self.x_star.tolist(),
            "support": list(self.support),
            "objective": self.objective,
            "supports_examined": self.supports_examined,
        }


def enumerate_supports(n: int, K: int) -> Iterator[tuple[int, ...]]:
    """Every subset of range(n) with at most K elements, by size and then lexicographically."""

    if n > MAX_ORACLE_N:
        raise SizeCapError(f"n={n} exceeds the enumeration cap of {MAX_ORACLE_N}")
    if not 0 <= K <= n:
        raise ValueError(f"K must lie in [0, n] (got K={K}, n={n})")
    return itertools.chain.from_iterable(
        itertools.combinations(range(n), size) for size in range(K + 1)
    )


def _box_only(x_set: ConvexSetX) -> bool:
    return not x_set.simplex and x_set.return_halfspace is None and x_set.quad_risk is None


def _is_projection_instance(spec: ProblemSpec) -> bool:
    objective = spec.objective
    if not isinstance(objective, LeastSquares) or objective.A.shape != (spec.n, spec.n):
        return False
    if not _box_only(spec.x_set):
        return False
    return bool(np.array_equal(objective.A, np.eye(spec.n)))


def _least_squares_on_box(
    objective: LeastSquares, support: tuple[int, ...], lower: Vector, upper: Vector
) -> Vector:
    """Exact min ½‖Ax − b‖² with x zero off the support and boxed on it."""

    x = np.zeros(objective.n)
    columns = np.asarray(support, dtype=np.intp)
    pinned = columns[lower[columns] >= upper[columns]]
    free = columns[lower[columns] < upper[columns]]
    x[pinned] = lower[pinned]
    if free.size:
        target = objective.bobs - objective.A[:, pinned] @ x[pinned]
        fit = lsq_linear(
            objective.A[:, free], target, bounds=(lower[free], upper[free]), method="bvls"
        )
        x[free] = np.clip(fit.x, lower[free], upper[free])
    return x


def _better(objective: float, support: tuple[int, ...], best: OracleResult | None) -> bool:
    if best is None or objective < best.objective:
        return True
    return objective == best.objective and support < best.support


def global_solve(spec: ProblemSpec, opts: InnerSolverOpts | None = None) -> OracleResult:
    """Minimize f over X ∩ Y by solving the convex restriction of every support.

    Least squares over a plain box is solved exactly by bounded least squares, with the
    per-coordinate clamp for identity designs. Everything else goes through the
    projected-gradient solver at ``ORACLE_GRAD_TOL``; a solve that reaches its iteration
    cap is kept if it met the caller's tolerance. Supports whose restriction is empty are
    skipped. Ties go to the lexicographically smallest support.
    """

    if spec.n > MAX_ORACLE_N:
        raise SizeCapError(f"n={spec.n} exceeds the enumeration cap of {MAX_ORACLE_N}")
    inner_opts = (opts or InnerSolverOpts()).tightened(ORACLE_GRAD_TOL)
    objective_fn = spec.objective
    separable = _is_projection_instance(spec)
    exact = isinstance(objective_fn, LeastSquares) and _box_only(spec.x_set)
    best: OracleResult | None = None
    examined = 0
    skipped = 0
    for support in enumerate_supports(spec.n, spec.y_set.K):
        examined += 1
        try:
            restricted = spec.x_set.restricted(support, spec.y_set)
        except ValueError:
            skipped += 1
            continue
        assert restricted.box is not None
        lower, upper = restricted.box.lower, restricted.box.upper
        if separable:
            assert isinstance(objective_fn, LeastSquares)
            x = np.clip(objective_fn.bobs, lower, upper)
        elif exact:
            assert isinstance(objective_fn, LeastSquares)
            x = _least_squares_on_box(objective_fn, support, lower, upper)
        else:
            try:
                x = minimize_over(spec, restricted, inner_opts).x
            except (EmptyIntersectionError, RiskInfeasibleError) as exc:
                logger.log(
                    TRACE, "oracle.infeasible", extra={"support": support, "residual": exc.residual}
                )
                skipped += 1
                continue
        mask = np.zeros(spec.n, dtype=bool)
        mask[list(support)] = True
        x = np.where(mask, np.clip(x, lower, upper), 0.0)
        objective = eval_objective(spec, x)
        logger.log(TRACE, "oracle.support", extra={"support": support, "objective": objective})
        if _better(objective, support, best):
            best = OracleResult(x, support, objective, examined)
    logger.debug("oracle.finish", extra={"examined": examined, "skipped": skipped})
    if best is None:
        raise GlobalInfeasibleError(f"none of the {examined} supports admits a feasible point")
    return OracleResult(best.x_star, best.support, best.objective, examined)


def projection_oracle(w: ArrayLike, Y: SemicontinuousSet) -> OracleResult:
    """Brute-force min ‖y − w‖² over Y, scoring every support at once."""

    costs = branch_costs(w, Y)
    supports = list(enumerate_supports(Y.n, Y.K))
    indicator = np.zeros((len(supports), Y.n))
    for row, support in enumerate(supports):
        indicator[row, list(support)] = 1.0
    values = float(costs.q.sum()) + indicator @ costs.v
    lowest = float(values.min())
    winner = min((supports[i], int(i)) for i in np.flatnonzero(values == lowest))[1]
    return OracleResult(
        x_star=indicator[winner] * costs.y_on,
        support=supports[winner],
        objective=lowest,
        supports_examined=len(supports),
    )


def projection_spec(w: ArrayLike, Y: SemicontinuousSet) -> ProblemSpec:
    """The instance min ½‖x − w‖² over ℝⁿ ∩ Y, whose optimum is half the projection distance."""

    n = Y.n
    return ProblemSpec(
        objective=LeastSquares(np.eye(n), np.asarray(w, dtype=np.float64)),
        x_set=ConvexSetX(box=Box.uniform(n, -np.inf, np.inf)),
        y_set=Y,
        n=n,
    )
