from __future__ import annotations

import numpy as np
import pytest

from ssal.algorithm import run
from ssal.inner import EmptyIntersectionError, minimize_over
from ssal.model import (
    Box,
    ConvexSetX,
    LeastSquares,
    ProblemSpec,
    SemicontinuousSet,
    eval_objective,
)
from ssal.oracle import (
    GlobalInfeasibleError,
    SizeCapError,
    enumerate_supports,
    global_solve,
    projection_oracle,
    projection_spec,
)
from ssal.problems import (
    CsInstance,
    PortfolioInstance,
    PortfolioParams,
    baseline_hard_threshold,
    gen_cs,
    gen_portfolio,
)
from ssal.semiproj import projection_distance
from ssal.stationarity import stationarity_residual


def _ncsb(A: list[list[float]], bobs: list[float]) -> ProblemSpec:
    return ProblemSpec(
        objective=LeastSquares(A, bobs),
        x_set=ConvexSetX(box=Box.uniform(2, 0.0, 10.0)),
        y_set=SemicontinuousSet([0.1, 0.1], [1.0, 1.0], 1),
        n=2,
    )


def _with_budget(spec: ProblemSpec, K: int) -> ProblemSpec:
    levels = SemicontinuousSet(spec.y_set.a, spec.y_set.b, K)
    return ProblemSpec(objective=spec.objective, x_set=spec.x_set, y_set=levels, n=spec.n)


def test_enumerate_supports_orders_by_size_then_lexicographically() -> None:
    assert list(enumerate_supports(3, 1)) == [(), (0,), (1,), (2,)]
    assert len(list(enumerate_supports(3, 3))) == 8
    assert len(list(enumerate_supports(4, 2))) == 11


def test_enumerate_supports_validates_eagerly() -> None:
    with pytest.raises(SizeCapError):
        enumerate_supports(25, 2)
    with pytest.raises(ValueError):
        enumerate_supports(3, 4)


@pytest.mark.parametrize(
    "A",
    [
        [[1.0, 0.0], [0.0, 1.0]],
        [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
    ],
)
def test_global_solve_small_ncsb(A: list[list[float]]) -> None:
    bobs = [0.5, 0.02] + [0.0] * (len(A) - 2)
    result = global_solve(_ncsb(A, bobs))
    assert result.support == (0,)
    np.testing.assert_allclose(result.x_star, [0.5, 0.0], atol=1e-9)
    assert result.objective == pytest.approx(0.0002, abs=1e-12)
    assert result.supports_examined == 3


def test_global_solve_matches_the_projection() -> None:
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        Y = SemicontinuousSet(np.full(n, 0.1), np.full(n, 1.0), int(rng.integers(1, n)))
        w = rng.normal(size=n)
        best = global_solve(projection_spec(w, Y))
        assert abs(2.0 * best.objective - projection_distance(w, Y)) <= 1e-10
        assert abs(projection_oracle(w, Y).objective - projection_distance(w, Y)) <= 1e-10


def test_projection_oracle_breaks_ties_lexicographically() -> None:
    Y = SemicontinuousSet([0.1, 0.1, 0.1], [1.0, 1.0, 1.0], 1)
    result = projection_oracle([0.5, 0.5, 0.5], Y)
    assert result.support == (0,)
    np.testing.assert_allclose(result.x_star, [0.5, 0.0, 0.0])
    assert result.supports_examined == 4


def test_objective_is_monotone_in_budget(small_cs: CsInstance) -> None:
    values = [global_solve(_with_budget(small_cs.spec, K)).objective for K in range(1, 4)]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(values, values[1:]))


def test_oracle_is_never_beaten_by_ssal(small_cs: CsInstance) -> None:
    best = global_solve(small_cs.spec)
    assert best.supports_examined == 1 + 12 + 66 + 220
    assert best.objective == pytest.approx(eval_objective(small_cs.spec, best.x_star))
    report = run(small_cs.spec)
    if report.polish_error is None:
        assert best.objective <= report.objective_polished + 1e-8


def test_unreachable_budget_has_no_global_point(small_portfolio: PortfolioInstance) -> None:
    with pytest.raises(GlobalInfeasibleError):
        global_solve(_with_budget(small_portfolio.spec, 3))


def test_size_cap_applies_to_instances() -> None:
    n = 25
    spec = ProblemSpec(
        objective=LeastSquares(np.eye(n), np.zeros(n)),
        x_set=ConvexSetX(box=Box.uniform(n, 0.0, 1.0)),
        y_set=SemicontinuousSet(np.full(n, 0.1), np.full(n, 1.0), 2),
        n=n,
    )
    with pytest.raises(SizeCapError):
        global_solve(spec)


def test_least_squares_restriction_with_a_pinned_coordinate() -> None:
    spec = ProblemSpec(
        objective=LeastSquares([[1.0, 1.0], [0.0, 1.0]], [1.1, 1.0]),
        x_set=ConvexSetX(box=Box([0.0, 0.0], [0.1, 10.0])),
        y_set=SemicontinuousSet([0.1, 0.1], [1.0, 1.0], 2),
        n=2,
    )
    result = global_solve(spec)
    assert result.support == (0, 1)
    np.testing.assert_allclose(result.x_star, [0.1, 1.0], atol=1e-10)
    assert result.objective == pytest.approx(0.0, abs=1e-18)


@pytest.mark.parametrize("seed", range(5))
def test_nonnegative_sensing_instances_are_solved_exactly(seed: int) -> None:
    instance = gen_cs(8, 12, 3, sigma2=0.01, seed=seed, a=1e-5, u=10.0)
    best = global_solve(instance.spec)
    assert best.supports_examined == 1 + 12 + 66 + 220
    assert instance.spec.y_set.contains(best.x_star)
    assert instance.spec.x_set.violation(best.x_star) == 0.0
    assert best.objective <= eval_objective(instance.spec, baseline_hard_threshold(instance)) + 1e-8
    assert stationarity_residual(instance.spec, best.x_star).residual <= 1e-6


def test_portfolio_supports_below_the_return_floor_are_skipped() -> None:
    spec = gen_portfolio(10, 3, seed=0, params=PortfolioParams(K=4)).spec
    with pytest.raises(EmptyIntersectionError):
        minimize_over(spec, spec.x_set.restricted((0, 3, 8, 9), spec.y_set))

    best = global_solve(spec)

    assert best.supports_examined == 1 + 10 + 45 + 120 + 210
    assert 1 <= len(best.support) <= 4
    assert spec.y_set.contains(best.x_star, tol=1e-9)
    assert spec.x_set.violation(best.x_star) <= 1e-8
