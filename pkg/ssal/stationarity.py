"""First-order stationarity certificate for candidate solutions of (P).

At a stationary point x with support J there are multipliers ν, η ≥ 0 for the active
semicontinuous levels, κ on the complement of J, and an element of the normal cone of X
such that 0 = ∇f(x) + ν − η + κ + N_X(x). Multipliers on inactive constraints are fixed
at zero; the active ones are fitted by bounded least squares. Because κ is free on J̄ it
absorbs those rows exactly, so only the rows in J enter the residual.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import lsq_linear

from ssal.model import ProblemSpec, Vector, eval_gradient

__all__ = ["FeasibilityError", "StationarityCertificate", "stationarity_residual"]

logger = logging.getLogger("ssal.stationarity")

FEASIBILITY_TOL = 1e-6
ACTIVE_TOL = 1e-6
_FIT_MAX_ITER = 1000


class FeasibilityError(ValueError):
    """Raised when the candidate point violates X by more than the certification tolerance."""


@dataclass(frozen=True, slots=True, eq=False)
class StationarityCertificate:
    nu: Vector
    eta: Vector
    kappa: Vector
    residual: float
    support: tuple[int, ...]
    xcone_multipliers: dict[str, float | Vector] = field(default_factory=dict)


@dataclass(slots=True)
class _Columns:
    """Normal-cone columns over all n rows, with their bounds and owners."""

    vectors: list[Vector] = field(default_factory=list)
    lower: list[float] = field(default_factory=list)
    owners: list[tuple[str, int]] = field(default_factory=list)

    def add(self, vector: Vector, owner: str, index: int = -1, *, free: bool = False) -> None:
        self.vectors.append(vector)
        self.lower.append(-math.inf if free else 0.0)
        self.owners.append((owner, index))


def _near(values: Vector, targets: Vector) -> NDArray[np.bool_]:
    finite = np.isfinite(targets)
    scale = np.maximum(1.0, np.abs(np.where(finite, targets, 0.0)))
    return finite & (np.abs(values - np.where(finite, targets, 0.0)) <= ACTIVE_TOL * scale)


def stationarity_residual(
    spec: ProblemSpec, x: ArrayLike, zero_tol: float = 1e-6
) -> StationarityCertificate:
    if not zero_tol > 0:
        raise ValueError(f"zero_tol must be positive (got {zero_tol})")
    point = spec.check_point(x)
    violation = spec.x_set.violation(point)
    if violation > FEASIBILITY_TOL:
        raise FeasibilityError(f"x violates X by {violation:.3e}")

    n = spec.n
    in_support = np.abs(point) > zero_tol
    support = np.flatnonzero(in_support)
    gradient = eval_gradient(spec, point)
    columns = _Columns()

    def unit(i: int, sign: float) -> Vector:
        column = np.zeros(n)
        column[i] = sign
        return column

    y_set = spec.y_set
    for i in support[_near(point[support], y_set.b[support])]:
        columns.add(unit(int(i), 1.0), "nu", int(i))
    for i in support[_near(point[support], y_set.a[support])]:
        columns.add(unit(int(i), -1.0), "eta", int(i))

    x_set = spec.x_set
    if x_set.box is not None:
        for i in support[_near(point[support], x_set.box.upper[support])]:
            columns.add(unit(int(i), 1.0), "box_upper", int(i))
        for i in support[_near(point[support], x_set.box.lower[support])]:
            columns.add(unit(int(i), -1.0), "box_lower", int(i))
    if x_set.simplex:
        columns.add(np.ones(n), "budget", free=True)
    if x_set.return_halfspace is not None:
        halfspace = x_set.return_halfspace
        if abs(float(halfspace.mu @ point) - halfspace.rho0) <= ACTIVE_TOL:
            columns.add(-halfspace.mu, "return_halfspace")
    if x_set.quad_risk is not None:
        risk = x_set.quad_risk
        if abs(risk.value(point) - risk.sigma0) <= ACTIVE_TOL:
            columns.add(2.0 * risk.d * point, "quad_risk")

    coefficients = np.zeros(len(columns.vectors))
    if columns.vectors and support.size:
        full = np.column_stack(columns.vectors)
        fit = lsq_linear(
            full[support],
            -gradient[support],
            bounds=(np.asarray(columns.lower), np.full(len(columns.lower), np.inf)),
            method="bvls",
            max_iter=_FIT_MAX_ITER,
        )
        coefficients = np.asarray(fit.x, dtype=np.float64)
        combination = full @ coefficients
    else:
        combination = np.zeros(n)

    stationarity_rows = gradient + combination
    residual = float(np.linalg.norm(stationarity_rows[support])) if support.size else 0.0
    kappa = np.where(in_support, 0.0, -stationarity_rows)

    nu = np.zeros(n)
    eta = np.zeros(n)
    cone: dict[str, float | Vector] = {}
    box_upper = np.zeros(n)
    box_lower = np.zeros(n)
    for (owner, index), value in zip(columns.owners, coefficients, strict=True):
        if owner == "nu":
            nu[index] = value
        elif owner == "eta":
            eta[index] = value
        elif owner == "box_upper":
            box_upper[index] = value
        elif owner == "box_lower":
            box_lower[index] = value
        else:
            cone[owner] = float(value)
    if x_set.box is not None:
        cone["box_upper"] = box_upper
        cone["box_lower"] = box_lower
    logger.debug(
        "stationarity.fit", extra={"support_size": int(support.size), "residual": residual}
    )
    return StationarityCertificate(
        nu=nu,
        eta=eta,
        kappa=kappa,
        residual=residual,
        support=tuple(int(i) for i in support),
        xcone_multipliers=cone,
    )
