from __future__ import annotations

import numpy as np
import pytest

from ssal.inner import (
    InnerSolverError,
    InnerSolverOpts,
    RiskInfeasibleError,
    StepRule,
    XSubproblemSolver,
    minimize_over,
    solve_x_subproblem,
)
from ssal.model import (
    Box,
    ConvexSetX,
    LeastSquares,
    ProblemSpec,
    QuadraticForm,
    QuadRisk,
    SemicontinuousSet,
    augmented_lagrangian,
)


def _risk_spec(lower: float, upper: float, sigma0: float) -> ProblemSpec:
    return ProblemSpec(
        objective=LeastSquares([[1.0]], [1.0]),
        x_set=ConvexSetX(box=Box.uniform(1, lower, upper), quad_risk=QuadRisk([1.0], sigma0)),
        y_set=SemicontinuousSet([0.1], [2.0], 1),
        n=1,
    )


def test_separable_subproblem_is_a_clamped_average(make_spec) -> None:
    spec = make_spec([1.0, -4.0, 30.0], b=10.0, upper=10.0)
    y = np.array([3.0, 0.0, 1.0])
    x = solve_x_subproblem(spec, y, np.zeros(3), 1.0)
    np.testing.assert_allclose(x, [2.0, 0.0, 10.0], atol=1e-7)


def test_large_penalty_pulls_towards_projected_target(make_spec) -> None:
    spec = make_spec([0.5, 0.5])
    x = solve_x_subproblem(spec, np.array([2.0, -1.0]), np.zeros(2), 1e6)
    np.testing.assert_allclose(x, [1.0, 0.0], atol=1e-3)


def test_joint_minimizer_is_returned_unchanged(make_spec) -> None:
    spec = make_spec([0.3, 0.6])
    y = np.array([0.3, 0.6])
    x = solve_x_subproblem(spec, y, np.zeros(2), 1.0)
    np.testing.assert_allclose(x, y, atol=1e-8)


def test_solve_never_increases_the_lagrangian(make_spec) -> None:
    rng = np.random.default_rng(9)
    spec = make_spec([0.2, 0.9, -0.3, 0.5], K=2)
    solver = XSubproblemSolver(spec, 1.0)
    for _ in range(20):
        y = rng.uniform(0.0, 1.0, 4)
        lam = rng.normal(size=4)
        warm = rng.uniform(0.0, 1.0, 4)
        result = solver.solve(y, lam, warm)
        before = augmented_lagrangian(spec, warm, y, lam, 1.0)
        after = augmented_lagrangian(spec, result.x, y, lam, 1.0)
        assert after <= before + 1e-12
        assert result.residual <= solver.opts.grad_tol
        assert spec.x_set.violation(result.x) <= 1e-8


def test_box_quadratic_matches_coordinate_descent() -> None:
    rng = np.random.default_rng(21)
    B = rng.normal(size=(4, 4))
    M = B @ B.T / 4.0
    spec = ProblemSpec(
        objective=QuadraticForm(0.5 * (M + M.T)),
        x_set=ConvexSetX(box=Box.uniform(4, -1.0, 1.0)),
        y_set=SemicontinuousSet(np.full(4, 0.1), np.full(4, 1.0), 2),
        n=4,
    )
    matrix = spec.objective.M  # type: ignore[union-attr]
    y, lam, rho = rng.normal(size=4), rng.normal(size=4), 1.0

    x_cd = np.zeros(4)
    for _ in range(200):
        for i in range(4):
            off = float(matrix[i] @ x_cd - matrix[i, i] * x_cd[i])
            x_cd[i] = np.clip((lam[i] + rho * y[i] - 2.0 * off) / (2.0 * matrix[i, i] + rho), -1, 1)

    x_pg = solve_x_subproblem(spec, y, lam, rho)
    assert augmented_lagrangian(spec, x_pg, y, lam, rho) == pytest.approx(
        augmented_lagrangian(spec, x_cd, y, lam, rho), abs=1e-6
    )


def test_feasible_warm_start_is_kept_and_infeasible_one_projected(make_spec) -> None:
    solver = XSubproblemSolver(make_spec([0.5, 0.5]), 1.0)
    target = np.zeros(2)
    np.testing.assert_array_equal(solver.start_point([0.2, 0.7], target), [0.2, 0.7])
    np.testing.assert_array_equal(solver.start_point([1.5, -0.5], target), [1.0, 0.0])


def test_binding_risk_constraint_is_met_by_the_multiplier_loop() -> None:
    result = minimize_over(_risk_spec(0.0, 2.0, 0.25), _risk_spec(0.0, 2.0, 0.25).x_set)
    assert result.x[0] == pytest.approx(0.5, abs=1e-6)
    assert result.x[0] ** 2 <= 0.25 + 1e-8
    assert result.risk_multiplier == pytest.approx(0.5, abs=1e-3)


def test_slack_risk_constraint_keeps_a_zero_multiplier() -> None:
    spec = _risk_spec(0.0, 2.0, 4.0)
    result = minimize_over(spec, spec.x_set)
    assert result.x[0] == pytest.approx(1.0, abs=1e-7)
    assert result.risk_multiplier == 0.0


def test_unreachable_risk_level_raises() -> None:
    spec = _risk_spec(1.0, 2.0, 0.25)
    with pytest.raises(RiskInfeasibleError) as excinfo:
        minimize_over(spec, spec.x_set)
    assert excinfo.value.residual == pytest.approx(0.75)


def test_iteration_cap_raises_with_residual(make_spec) -> None:
    spec = make_spec([0.3, 0.6])
    with pytest.raises(InnerSolverError) as excinfo:
        solve_x_subproblem(
            spec, np.array([0.9, 0.1]), np.zeros(2), 1.0, InnerSolverOpts(max_iters=1)
        )
    assert excinfo.value.iterations == 1
    assert excinfo.value.residual > 0.0
    assert "iteration cap" in str(excinfo.value)


def test_iteration_cap_within_cap_tol_returns_the_last_iterate(make_spec) -> None:
    spec = make_spec([0.3, 0.6])
    result = XSubproblemSolver(
        spec, 1.0, InnerSolverOpts(max_iters=1, cap_tol=10.0)
    ).solve(np.array([0.9, 0.1]), np.zeros(2))
    assert result.iterations == 1
    assert result.residual <= 10.0
    assert spec.x_set.violation(result.x) == 0.0


def test_tightened_options_fall_back_to_the_previous_tolerance() -> None:
    opts = InnerSolverOpts(grad_tol=1e-8).tightened(1e-10)
    assert opts.grad_tol == 1e-10
    assert opts.cap_tol == 1e-8
    assert InnerSolverOpts().cap_tol == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"grad_tol": 0.0},
        {"dykstra_tol": -1.0},
        {"max_iters": 0},
        {"cap_tol": -1.0},
        {"step_rule": StepRule(shrink=1.0)},
    ],
)
def test_solver_options_are_validated(kwargs: dict) -> None:
    with pytest.raises(ValueError):
        InnerSolverOpts(**kwargs)


def test_negative_penalty_is_rejected(make_spec) -> None:
    with pytest.raises(ValueError):
        XSubproblemSolver(make_spec([0.5]), -1.0)
