"""Shared pytest fixtures."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence

import numpy as np
import pytest
from click.testing import CliRunner

from ssal.model import Box, ConvexSetX, LeastSquares, ProblemSpec, SemicontinuousSet
from ssal.problems import CsInstance, PortfolioInstance, PortfolioParams, gen_cs, gen_portfolio

SpecFactory = Callable[..., ProblemSpec]


def separable_spec(
    center: Sequence[float],
    *,
    a: float = 0.1,
    b: float = 1.0,
    K: int = 1,
    lower: float = 0.0,
    upper: float = 1.0,
) -> ProblemSpec:
    """f(x) = ½‖x − c‖² over the box [lower, upper]ⁿ with uniform levels [a, b]."""

    n = len(center)
    return ProblemSpec(
        objective=LeastSquares(np.eye(n), np.asarray(center, dtype=float)),
        x_set=ConvexSetX(box=Box.uniform(n, lower, upper)),
        y_set=SemicontinuousSet(np.full(n, a), np.full(n, b), K),
        n=n,
    )


@pytest.fixture()
def make_spec() -> SpecFactory:
    return separable_spec


@pytest.fixture(scope="session")
def small_portfolio() -> PortfolioInstance:
    return gen_portfolio(12, 3, seed=7, params=PortfolioParams(K=5))


@pytest.fixture(scope="session")
def small_cs() -> CsInstance:
    return gen_cs(8, 12, 3, sigma2=0.01, seed=3)


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture(autouse=True)
def reset_ssal_logger() -> Iterator[None]:
    """Undo configure_logging so caplog keeps seeing ``ssal.*`` records."""

    yield
    logger = logging.getLogger("ssal")
    for handler in list(logger.handlers):
        if getattr(handler, "_ssal_handler", False):
            logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True
