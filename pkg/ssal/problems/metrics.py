"""Quality metrics for recovered signals and solver comparisons."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike

from ssal.model import DimensionError

__all__ = ["log10_ratio", "mse", "relative_difference"]


def mse(f: ArrayLike, f_hat: ArrayLike) -> float:
    """(1/n)‖f − f̂‖²."""

    truth = np.asarray(f, dtype=np.float64)
    estimate = np.asarray(f_hat, dtype=np.float64)
    if truth.ndim != 1 or truth.shape != estimate.shape:
        raise DimensionError(
            f"mse needs equal-length vectors (got {truth.shape}, {estimate.shape})"
        )
    if truth.size == 0:
        raise DimensionError("mse of empty vectors is undefined")
    diff = truth - estimate
    return float(diff @ diff) / truth.size


def relative_difference(value: float, reference: float) -> float:
    """(value − reference)/|reference|; ±inf when only the reference vanishes."""

    if reference == 0.0:
        return 0.0 if value == 0.0 else math.copysign(math.inf, value)
    return (value - reference) / abs(reference)


def log10_ratio(numerator: float, denominator: float) -> float:
    if not numerator > 0 or not denominator > 0:
        raise ValueError(
            f"log10_ratio needs positive arguments (got {numerator}, {denominator})"
        )
    return math.log10(numerator / denominator)
