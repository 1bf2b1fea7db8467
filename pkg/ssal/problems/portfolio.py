"""Simulated factor-model portfolios with cardinality and buy-in thresholds."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from ssal.inner import InnerSolverError, InnerSolverOpts, project_polytope
from ssal.model import (
    Box,
    ConvexSetX,
    Halfspace,
    InstanceDocument,
    Matrix,
    ProblemSpec,
    QuadraticForm,
    QuadRisk,
    SemicontinuousSet,
    Vector,
)

from .errors import GeneratorError
from .rng import make_generator, uniform

__all__ = ["PortfolioInstance", "PortfolioParams", "gen_portfolio"]

logger = logging.getLogger("ssal.problems")


@dataclass(frozen=True, slots=True)
class PortfolioParams:
    """Return floor ρ₀, risk cap σ₀, buy-in level a, position cap b and cardinality K."""

    rho0: float = 2e-3
    sigma0: float = 1e-3
    a: float = 0.01
    b: float = 0.3
    K: int = 10
    with_risk: bool = False
    factor_samples: int = 200
    max_retries: int = 10

    def __post_init__(self) -> None:
        if not 0 < self.a <= self.b:
            raise ValueError(f"levels must satisfy 0 < a <= b (got a={self.a}, b={self.b})")
        if self.K < 1:
            raise ValueError(f"K must be at least 1 (got {self.K})")
        if self.factor_samples < 2 or self.max_retries < 1:
            raise ValueError("factor_samples must be >= 2 and max_retries >= 1")


@dataclass(frozen=True, slots=True, eq=False)
class PortfolioInstance:
    spec: ProblemSpec
    alpha: Vector
    factor_count: int
    seed: int
    beta: Matrix
    factor_cov: Matrix
    sigma_eps: Vector
    attempt: int = 0

    @property
    def instance_id(self) -> str:
        return f"portfolio-n{self.spec.n}-m{self.factor_count}-s{self.seed}"

    def to_document(self) -> InstanceDocument:
        metadata: dict[str, Any] = {
            "family": "portfolio",
            "seed": self.seed,
            "attempt": self.attempt,
            "factor_count": self.factor_count,
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "factor_cov": self.factor_cov.tolist(),
            "sigma_eps": self.sigma_eps.tolist(),
        }
        return InstanceDocument(spec=self.spec, instance_id=self.instance_id, metadata=metadata)


def _feasible(x_set: ConvexSetX, n: int) -> bool:
    """One projection of the uniform portfolio onto X (risk checked at the projected point)."""

    polytope = x_set.without_risk()
    assert polytope is not None
    try:
        point = project_polytope(np.full(n, 1.0 / n), polytope, InnerSolverOpts())
    except InnerSolverError:
        return False
    risk = x_set.quad_risk
    return risk is None or risk.value(point) <= risk.sigma0


def gen_portfolio(
    n: int, m: int, seed: int, params: PortfolioParams | None = None
) -> PortfolioInstance:
    """Draw α ~ U[0, 0.03], β ~ U[0.3, 2]/m, factor series ~ U[0, 0.4] and σ_ε ~ U[0, 0.002].

    M = BΣBᵀ + diag(σ_ε) with Σ the sample covariance of ``factor_samples`` i.i.d. factor
    draws. A rank-deficient Σ or an empty X triggers a redraw on the next sub-seed.
    """

    params = params or PortfolioParams()
    if n < 2:
        raise ValueError(f"n must be at least 2 (got {n})")
    if not 1 <= m <= n:
        raise ValueError(f"factor count m must lie in [1, n] (got m={m}, n={n})")
    if params.K > n:
        raise ValueError(f"K={params.K} exceeds n={n}")
    if n * params.b < 1.0:
        raise ValueError(f"n·b = {n * params.b:g} < 1 leaves the budget unreachable")

    for attempt in range(params.max_retries):
        gen = make_generator(seed, attempt)
        alpha = uniform(gen, 0.0, 0.03, n)
        beta = uniform(gen, 0.3, 2.0, (n, m)) / m
        series = uniform(gen, 0.0, 0.4, (params.factor_samples, m))
        factor_cov = np.atleast_2d(np.cov(series, rowvar=False))
        sigma_eps = uniform(gen, 0.0, 0.002, n)
        if np.linalg.matrix_rank(factor_cov) < m:
            logger.info(
                "problems.regenerate",
                extra={"seed": seed, "attempt": attempt, "reason": "rank-deficient factor cov"},
            )
            continue
        systematic = beta @ factor_cov @ beta.T
        systematic = 0.5 * (systematic + systematic.T)
        x_set = ConvexSetX(
            box=Box.uniform(n, 0.0, params.b),
            simplex=True,
            return_halfspace=Halfspace(alpha, params.rho0),
            quad_risk=QuadRisk(sigma_eps, params.sigma0) if params.with_risk else None,
        )
        if not _feasible(x_set, n):
            logger.info(
                "problems.regenerate",
                extra={"seed": seed, "attempt": attempt, "reason": "empty feasible set"},
            )
            continue
        spec = ProblemSpec(
            objective=QuadraticForm(systematic + np.diag(sigma_eps)),
            x_set=x_set,
            y_set=SemicontinuousSet(np.full(n, params.a), np.full(n, params.b), params.K),
            n=n,
        )
        return PortfolioInstance(
            spec=spec,
            alpha=alpha,
            factor_count=m,
            seed=seed,
            beta=beta,
            factor_cov=factor_cov,
            sigma_eps=sigma_eps,
            attempt=attempt,
        )
    raise GeneratorError(
        f"no usable portfolio instance for n={n}, m={m}, seed={seed} "
        f"after {params.max_retries} attempts"
    )
