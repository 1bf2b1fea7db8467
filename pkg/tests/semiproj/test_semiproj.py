from __future__ import annotations

import numpy as np
import pytest

from ssal.model import DimensionError, SemicontinuousSet
from ssal.oracle import projection_oracle
from ssal.semiproj import (
    BranchCosts,
    branch_costs,
    project_semicard,
    projection_distance,
    select_support,
)


def _levels(n: int, a: float, b: float, K: int) -> SemicontinuousSet:
    return SemicontinuousSet(np.full(n, a), np.full(n, b), K)


@pytest.mark.parametrize(
    ("w", "a", "b", "q", "r", "y_on"),
    [
        (0.5, 0.1, 1.0, 0.25, 0.0, 0.5),
        (0.4, 1.0, 2.0, 0.16, 0.36, 1.0),
        (3.0, 1.0, 2.0, 9.0, 1.0, 2.0),
    ],
)
def test_branch_costs_examples(
    w: float, a: float, b: float, q: float, r: float, y_on: float
) -> None:
    costs = branch_costs([w], _levels(1, a, b, 1))
    assert costs.q[0] == pytest.approx(q)
    assert costs.r[0] == pytest.approx(r)
    assert costs.y_on[0] == pytest.approx(y_on)


def test_branch_costs_rejects_wrong_length() -> None:
    with pytest.raises(DimensionError):
        branch_costs([0.1, 0.2], _levels(3, 0.1, 1.0, 1))


def test_select_support_keeps_the_most_negative_entries() -> None:
    costs = branch_costs([3.0, 2.0, 0.5], _levels(3, 1.0, 4.0, 2))
    np.testing.assert_allclose(costs.v, [-9.0, -4.0, 0.0])
    selection = select_support(costs, 2)
    assert selection.z.tolist() == [1, 1, 0]
    assert selection.support == (0, 1)


def test_select_support_with_void_budget_keeps_nonpositive_entries() -> None:
    costs = BranchCosts(
        q=np.array([1.0, 0.0, 0.2]),
        r=np.array([0.0, 0.5, 0.0]),
        y_on=np.ones(3),
        w=np.zeros(3),
    )
    assert select_support(costs, 3).z.tolist() == [1, 0, 1]


def test_select_support_empty_when_all_costs_positive() -> None:
    costs = branch_costs([0.01, 0.02, -0.5], _levels(3, 0.5, 1.0, 2))
    assert np.all(costs.v > 0)
    assert select_support(costs, 2).z.tolist() == [0, 0, 0]
    with pytest.raises(ValueError):
        select_support(costs, -1)


def test_select_support_breaks_ties_by_index() -> None:
    costs = branch_costs([0.5, 0.5, 0.5], _levels(3, 0.1, 1.0, 1))
    assert select_support(costs, 1).z.tolist() == [1, 0, 0]
    # zero-cost entries inside the budget are kept
    flat = branch_costs([0.05], _levels(1, 0.1, 1.0, 1))
    assert flat.v[0] == 0.0
    assert select_support(flat, 1).z.tolist() == [1]


def test_project_semicard_examples() -> None:
    y, z = project_semicard([0.5, 0.02], _levels(2, 0.1, 1.0, 1))
    np.testing.assert_allclose(y, [0.5, 0.0])
    assert z.tolist() == [1, 0]

    member = np.array([0.0, 0.3, 0.9])
    y, _ = project_semicard(member, _levels(3, 0.1, 1.0, 2))
    np.testing.assert_array_equal(y, member)

    y, z = project_semicard([0.04], _levels(1, 0.1, 1.0, 1))
    assert y.tolist() == [0.0]
    assert z.tolist() == [0]


def test_projection_is_feasible_idempotent_and_optimal() -> None:
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        K = int(rng.integers(1, n + 1))
        Y = SemicontinuousSet(rng.uniform(0.05, 0.5, n), rng.uniform(0.6, 2.0, n), K)
        w = rng.normal(size=n)
        y, z = project_semicard(w, Y)
        assert Y.contains(y)
        assert int(z.sum()) <= K
        again, _ = project_semicard(y, Y)
        np.testing.assert_array_equal(again, y)
        distance = float(np.sum((y - w) ** 2))
        assert distance == pytest.approx(projection_distance(w, Y), abs=1e-12)
        assert abs(distance - projection_oracle(w, Y).objective) <= 1e-10


def test_projection_is_permutation_equivariant() -> None:
    rng = np.random.default_rng(8)
    Y = _levels(6, 0.1, 1.0, 3)
    for _ in range(50):
        w = rng.normal(size=6)
        perm = rng.permutation(6)
        y, _ = project_semicard(w, Y)
        permuted, _ = project_semicard(w[perm], Y)
        np.testing.assert_array_equal(permuted, y[perm])


def test_fixed_level_coordinates_collapse_to_the_level() -> None:
    Y = SemicontinuousSet([0.5, 0.5], [0.5, 0.5], 1)
    y, z = project_semicard([0.9, 0.2], Y)
    np.testing.assert_allclose(y, [0.5, 0.0])
    assert z.tolist() == [1, 0]
