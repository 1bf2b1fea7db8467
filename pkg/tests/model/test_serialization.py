from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from ssal.model import (
    Box,
    ConvexSetX,
    Halfspace,
    InstanceDocument,
    InstanceFormatError,
    LeastSquares,
    ProblemSpec,
    QuadraticForm,
    QuadRisk,
    SemicontinuousSet,
    dump_instance,
    load_instance,
    spec_from_dict,
    spec_to_dict,
)


def _portfolio_like() -> ProblemSpec:
    return ProblemSpec(
        objective=QuadraticForm(np.array([[2.0, 0.5], [0.5, 1.0]])),
        x_set=ConvexSetX(
            box=Box.uniform(2, 0.0, 0.8),
            simplex=True,
            return_halfspace=Halfspace([0.01, 0.02], 0.002),
            quad_risk=QuadRisk([0.001, 0.002], 0.001),
        ),
        y_set=SemicontinuousSet([0.01, 0.01], [0.8, 0.8], 2),
        n=2,
    )


def test_spec_payload_follows_schema() -> None:
    payload = spec_to_dict(_portfolio_like())
    assert payload["n"] == 2
    assert payload["objective"]["kind"] == "quadratic_form"
    assert payload["x_set"]["simplex"] is True
    assert payload["x_set"]["return_halfspace"] == {"mu": [0.01, 0.02], "rho0": 0.002}
    assert payload["y_set"]["K"] == 2
    restored = spec_from_dict(json.loads(json.dumps(payload)))
    assert isinstance(restored.objective, QuadraticForm)
    np.testing.assert_array_equal(restored.objective.M, [[2.0, 0.5], [0.5, 1.0]])
    assert restored.x_set.quad_risk is not None
    np.testing.assert_array_equal(restored.x_set.quad_risk.d, [0.001, 0.002])


def test_infinite_bounds_travel_as_null() -> None:
    spec = ProblemSpec(
        objective=LeastSquares(np.eye(2), [1.0, 2.0]),
        x_set=ConvexSetX(box=Box.uniform(2, 0.0, math.inf)),
        y_set=SemicontinuousSet([1e-5, 1e-5], [math.inf, math.inf], 1),
        n=2,
    )
    payload = spec_to_dict(spec)
    assert payload["x_set"]["box"]["upper"] == [None, None]
    restored = spec_from_dict(json.loads(json.dumps(payload)))
    assert restored.x_set.box is not None
    assert np.all(np.isinf(restored.x_set.box.upper))
    assert np.all(np.isinf(restored.y_set.b))


def test_dense_diagonal_risk_matrix_is_accepted() -> None:
    payload = spec_to_dict(_portfolio_like())
    payload["x_set"]["quad_risk"]["D"] = [[0.001, 0.0], [0.0, 0.002]]
    restored = spec_from_dict(payload)
    assert restored.x_set.quad_risk is not None
    np.testing.assert_array_equal(restored.x_set.quad_risk.d, [0.001, 0.002])
    payload["x_set"]["quad_risk"]["D"] = [[0.001, 0.5], [0.5, 0.002]]
    with pytest.raises(InstanceFormatError, match="diagonal"):
        spec_from_dict(payload)


@pytest.mark.parametrize(
    ("mutate", "message"),
    [
        (lambda p: p.pop("y_set"), "Missing required field"),
        (lambda p: p["objective"].update(kind="cubic"), "Unknown objective kind"),
        (lambda p: p.update(n=3), "dimension"),
    ],
)
def test_schema_violations_raise_format_error(mutate, message: str) -> None:
    payload = spec_to_dict(_portfolio_like())
    mutate(payload)
    with pytest.raises(InstanceFormatError, match=message):
        spec_from_dict(payload)


def test_load_instance_reports_malformed_json(tmp_path: Path) -> None:
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 2,', encoding="utf-8")
    with pytest.raises(InstanceFormatError, match="invalid JSON"):
        load_instance(broken)
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(InstanceFormatError, match="object"):
        load_instance(listing)


def test_dump_and_load_keep_ground_truth(tmp_path: Path) -> None:
    document = InstanceDocument(
        spec=_portfolio_like(),
        f_true=np.array([0.3, 0.7]),
        metadata={"family": "portfolio", "seed": 4},
    )
    path = dump_instance(document, tmp_path / "nested" / "tiny.json")
    loaded = load_instance(path)
    assert loaded.instance_id == "tiny"
    assert loaded.metadata == {"family": "portfolio", "seed": 4}
    assert loaded.f_true is not None
    np.testing.assert_array_equal(loaded.f_true, [0.3, 0.7])
