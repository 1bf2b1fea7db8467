"""JSON instance codec shared by the CLI, the oracle and the generators."""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .types import (
    Box,
    ConvexSetX,
    Halfspace,
    LeastSquares,
    ProblemSpec,
    QuadraticForm,
    QuadRisk,
    SemicontinuousSet,
    Vector,
    as_vector,
)

__all__ = [
    "InstanceDocument",
    "InstanceFormatError",
    "dump_instance",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "spec_from_dict",
    "spec_to_dict",
]


class InstanceFormatError(ValueError):
    """Raised when an instance document does not follow the JSON schema."""


@dataclass(slots=True)
class InstanceDocument:
    """A problem instance plus the optional fields that travel with it on disk."""

    spec: ProblemSpec
    instance_id: str | None = None
    f_true: Vector | None = None
    metadata: dict[str, Any] = field(default_factory=dict)


def _encode(values: Vector) -> list[float | None]:
    return [float(v) if math.isfinite(v) else None for v in values.tolist()]


def _decode(values: Sequence[float | None], missing: float) -> list[float]:
    return [missing if v is None else float(v) for v in values]


def spec_to_dict(spec: ProblemSpec) -> dict[str, Any]:
    objective = spec.objective
    if isinstance(objective, QuadraticForm):
        objective_payload: dict[str, Any] = {"kind": objective.kind, "M": objective.M.tolist()}
    else:
        objective_payload = {
            "kind": objective.kind,
            "A": objective.A.tolist(),
            "b": objective.bobs.tolist(),
        }
    x_set = spec.x_set
    x_payload: dict[str, Any] = {}
    if x_set.box is not None:
        x_payload["box"] = {
            "lower": _encode(x_set.box.lower),
            "upper": _encode(x_set.box.upper),
        }
    if x_set.simplex:
        x_payload["simplex"] = True
    if x_set.return_halfspace is not None:
        x_payload["return_halfspace"] = {
            "mu": x_set.return_halfspace.mu.tolist(),
            "rho0": x_set.return_halfspace.rho0,
        }
    if x_set.quad_risk is not None:
        x_payload["quad_risk"] = {
            "D": x_set.quad_risk.d.tolist(),
            "sigma0": x_set.quad_risk.sigma0,
        }
    return {
        "n": spec.n,
        "objective": objective_payload,
        "x_set": x_payload,
        "y_set": {
            "a": spec.y_set.a.tolist(),
            "b": _encode(spec.y_set.b),
            "K": spec.y_set.K,
        },
    }


def spec_from_dict(payload: Mapping[str, Any]) -> ProblemSpec:
    """Build a ProblemSpec, turning schema and dimension problems into InstanceFormatError."""

    try:
        n = int(payload["n"])
        objective_raw = payload["objective"]
        kind = objective_raw["kind"]
        objective: QuadraticForm | LeastSquares
        if kind == "quadratic_form":
            objective = QuadraticForm(np.asarray(objective_raw["M"], dtype=float))
        elif kind == "least_squares":
            objective = LeastSquares(
                np.asarray(objective_raw["A"], dtype=float),
                np.asarray(objective_raw["b"], dtype=float),
            )
        else:
            raise InstanceFormatError(f"Unknown objective kind '{kind}'.")
        x_raw = payload.get("x_set", {})
        box = None
        if "box" in x_raw:
            box = Box(
                _decode(x_raw["box"]["lower"], -math.inf),
                _decode(x_raw["box"]["upper"], math.inf),
            )
        halfspace = None
        if "return_halfspace" in x_raw:
            block = x_raw["return_halfspace"]
            halfspace = Halfspace(block["mu"], block["rho0"])
        risk = None
        if "quad_risk" in x_raw:
            block = x_raw["quad_risk"]
            d = np.asarray(block["D"], dtype=float)
            if d.ndim == 2:
                if np.any(d - np.diag(np.diag(d))):
                    raise InstanceFormatError("quad_risk.D must be diagonal.")
                d = np.diag(d)
            risk = QuadRisk(d, block["sigma0"])
        x_set = ConvexSetX(
            box=box,
            simplex=bool(x_raw.get("simplex", False)),
            return_halfspace=halfspace,
            quad_risk=risk,
        )
        y_raw = payload["y_set"]
        y_set = SemicontinuousSet(y_raw["a"], _decode(y_raw["b"], math.inf), y_raw["K"])
        return ProblemSpec(objective=objective, x_set=x_set, y_set=y_set, n=n)
    except InstanceFormatError:
        raise
    except KeyError as exc:
        raise InstanceFormatError(f"Missing required field {exc} in instance payload.") from exc
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(str(exc)) from exc


def instance_to_dict(document: InstanceDocument) -> dict[str, Any]:
    payload = spec_to_dict(document.spec)
    if document.instance_id is not None:
        payload["instance_id"] = document.instance_id
    if document.f_true is not None:
        payload["f_true"] = document.f_true.tolist()
    if document.metadata:
        payload["metadata"] = document.metadata
    return payload


def instance_from_dict(payload: Mapping[str, Any]) -> InstanceDocument:
    spec = spec_from_dict(payload)
    f_true = None
    if payload.get("f_true") is not None:
        try:
            f_true = as_vector(payload["f_true"], "f_true", spec.n)
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from exc
    instance_id = payload.get("instance_id")
    return InstanceDocument(
        spec=spec,
        instance_id=str(instance_id) if instance_id is not None else None,
        f_true=f_true,
        metadata=dict(payload.get("metadata", {})),
    )


def load_instance(path: Path) -> InstanceDocument:
    """Read an instance file; the file stem stands in for a missing instance_id."""

    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})."
        ) from exc
    if not isinstance(payload, dict):
        raise InstanceFormatError(f"{path}: top-level JSON value must be an object.")
    document = instance_from_dict(payload)
    if document.instance_id is None:
        document.instance_id = path.stem
    return document


def dump_instance(document: InstanceDocument, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance_to_dict(document)) + "\n", encoding="utf-8")
    return path
