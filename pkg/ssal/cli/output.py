"""CSV and JSON writers with fixed, documented column orders."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import click

__all__ = [
    "BENCH_COLUMNS",
    "SOLVE_COLUMNS",
    "append_csv_row",
    "format_cell",
    "write_csv",
    "write_json",
]

SOLVE_COLUMNS: tuple[str, ...] = (
    "instance_id",
    "n",
    "K",
    "rho",
    "omega",
    "epsilon",
    "iterations",
    "converged",
    "objective_x",
    "objective_polished",
    "primal_residual",
    "stationarity_residual",
    "wall_time_s",
    "mse",
)

BENCH_COLUMNS: tuple[str, ...] = (
    "row_type",
    "kind",
    "n",
    "K",
    "seed",
    "iterations",
    "converged",
    "wall_time_s",
    "objective_polished",
    "mse_ssal",
    "mse_baseline",
    "log10_mse_ratio",
    "error",
    "instances",
    "failures",
    "iterations_min",
    "iterations_max",
    "iterations_mean",
    "wall_time_min",
    "wall_time_max",
    "wall_time_mean",
)


def format_cell(value: Any) -> str:
    """Booleans as true/false, missing or NaN values as empty cells, floats round-trippable."""

    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def _rows(columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> list[dict[str, str]]:
    return [{column: format_cell(row.get(column)) for column in columns} for row in rows]


def write_csv(
    columns: Sequence[str], rows: Iterable[Mapping[str, Any]], destination: Path | None
) -> None:
    """Write a header plus rows to ``destination`` or, when None, to stdout."""

    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(_rows(columns, rows))
    if destination is None:
        click.echo(buffer.getvalue(), nl=False)
        return
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text(buffer.getvalue(), encoding="utf-8")


def append_csv_row(columns: Sequence[str], row: Mapping[str, Any], destination: Path) -> None:
    """Append one row, writing the header first when the file is new or empty."""

    destination.parent.mkdir(parents=True, exist_ok=True)
    fresh = not destination.exists() or destination.stat().st_size == 0
    with destination.open("a", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns), lineterminator="\n")
        if fresh:
            writer.writeheader()
        writer.writerows(_rows(columns, [row]))


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def write_json(payload: Mapping[str, Any], destination: Path | None) -> None:
    text = json.dumps(_json_safe(dict(payload)), indent=2, allow_nan=False)
    if destination is None:
        click.echo(text)
        return
    destination.parent.mkdir(parents=True, exist_ok=True)
    destination.write_text(text + "\n", encoding="utf-8")
