"""Re-solve the convex restriction on a fixed support so the result lies in X ∩ Y."""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike

from ssal.inner import (
    EmptyIntersectionError,
    InnerSolverOpts,
    RiskInfeasibleError,
    minimize_over,
)
from ssal.model import ProblemSpec, Vector, eval_objective

__all__ = ["PolishInfeasibleError", "polish"]

logger = logging.getLogger("ssal.algorithm")


class PolishInfeasibleError(RuntimeError):
    """Raised when X has no point with the requested support."""


def polish(
    spec: ProblemSpec,
    z: ArrayLike,
    opts: InnerSolverOpts | None = None,
    x0: ArrayLike | None = None,
) -> tuple[Vector, float]:
    indicator = np.asarray(z)
    if indicator.shape != (spec.n,):
        raise ValueError(f"z must have length {spec.n} (got shape {indicator.shape})")
    mask = indicator != 0
    if int(mask.sum()) > spec.y_set.K:
        raise ValueError(f"support size {int(mask.sum())} exceeds K={spec.y_set.K}")
    support = np.flatnonzero(mask)
    try:
        restricted = spec.x_set.restricted(support, spec.y_set)
        result = minimize_over(spec, restricted, opts, x0)
    except (ValueError, EmptyIntersectionError, RiskInfeasibleError) as exc:
        logger.info(
            "polish.infeasible", extra={"support": support.tolist(), "reason": str(exc)}
        )
        raise PolishInfeasibleError(
            f"no point of X has support {support.tolist()}: {exc}"
        ) from exc
    assert restricted.box is not None
    # snap to the exact semicontinuous pattern; Dykstra leaves round-off off the support
    x = np.where(mask, np.clip(result.x, restricted.box.lower, restricted.box.upper), 0.0)
    return x, eval_objective(spec, x)
