from __future__ import annotations

import numpy as np
import pytest

from ssal.algorithm import PolishInfeasibleError, polish
from ssal.inner import minimize_over
from ssal.model import Box, ConvexSetX, LeastSquares, ProblemSpec, SemicontinuousSet
from ssal.problems import PortfolioInstance


def test_full_support_matches_the_level_box(make_spec) -> None:
    spec = make_spec([0.05, 0.5], K=2)
    x, objective = polish(spec, [1, 1])
    np.testing.assert_allclose(x, [0.1, 0.5], atol=1e-8)
    bounded = ConvexSetX(box=Box.uniform(2, 0.1, 1.0))
    reference = minimize_over(spec, bounded)
    np.testing.assert_allclose(x, reference.x, atol=1e-8)
    assert objective == pytest.approx(0.5 * 0.05**2)


def test_single_support_reduces_to_a_clamped_scalar_fit() -> None:
    spec = ProblemSpec(
        objective=LeastSquares([[2.0, 1.0], [0.0, 1.0]], [1.0, 3.0]),
        x_set=ConvexSetX(box=Box.uniform(2, 0.0, 10.0)),
        y_set=SemicontinuousSet([0.1, 0.1], [1.0, 1.0], 1),
        n=2,
    )
    x, objective = polish(spec, np.array([1, 0]))
    np.testing.assert_allclose(x, [0.5, 0.0], atol=1e-8)
    assert x[1] == 0.0
    assert objective == pytest.approx(4.5)


def test_unreachable_budget_is_reported(small_portfolio: PortfolioInstance) -> None:
    spec = small_portfolio.spec
    z = np.zeros(spec.n, dtype=np.int8)
    z[:3] = 1
    with pytest.raises(PolishInfeasibleError):
        polish(spec, z)


def test_feasible_portfolio_support_polishes_into_x_and_y(
    small_portfolio: PortfolioInstance,
) -> None:
    spec = small_portfolio.spec
    order = np.argsort(-small_portfolio.alpha, kind="stable")
    z = np.zeros(spec.n, dtype=np.int8)
    z[order[: spec.y_set.K]] = 1
    x, objective = polish(spec, z)
    assert spec.y_set.contains(x)
    assert spec.x_set.violation(x) <= 1e-8
    assert objective == pytest.approx(float(x @ spec.objective.M @ x))  # type: ignore[union-attr]


def test_support_larger_than_budget_is_rejected(make_spec) -> None:
    with pytest.raises(ValueError, match="exceeds K"):
        polish(make_spec([0.5, 0.5]), [1, 1])
    with pytest.raises(ValueError):
        polish(make_spec([0.5, 0.5]), [1, 0, 0])
