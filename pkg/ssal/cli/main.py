"""Click-based command line harness for the SSAL solver."""

from __future__ import annotations

import math
import statistics
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Any, TypeVar

import click
import numpy as np
from rich.console import Console
from rich.table import Table

from ssal.algorithm import SolveError, SolveReport, SolverParams, run
from ssal.config import SolverSettings, load_settings
from ssal.inner import InnerSolverError
from ssal.log import configure_logging
from ssal.model import (
    DimensionError,
    InstanceDocument,
    InstanceFormatError,
    SemicontinuousSet,
    dump_instance,
    load_instance,
)
from ssal.oracle import (
    MAX_ORACLE_N,
    GlobalInfeasibleError,
    SizeCapError,
    global_solve,
    projection_oracle,
)
from ssal.problems import (
    CsInstance,
    GeneratorError,
    PortfolioInstance,
    PortfolioParams,
    baseline_hard_threshold,
    gen_cs,
    gen_portfolio,
    log10_ratio,
    make_generator,
    mse,
    relative_difference,
    standard_normal,
)
from ssal.semiproj import projection_distance
from ssal.stationarity import FeasibilityError, stationarity_residual
from ssal.version import __version__

from .output import BENCH_COLUMNS, SOLVE_COLUMNS, append_csv_row, write_csv, write_json

__all__ = ["EXIT_CHECK_FAILED", "EXIT_NOT_CONVERGED", "app", "main"]

EXIT_NOT_CONVERGED = 2
EXIT_CHECK_FAILED = 3
PROJECTION_TOL = 1e-10

_FAMILY_KIND = {"portfolio": "quadratic_form", "cs": "least_squares"}
_INSTANCE_ERRORS = (InstanceFormatError, DimensionError, OSError)

F = TypeVar("F", bound=Callable[..., Any])


@dataclass
class CLIState:
    settings: SolverSettings

    def params_for(
        self,
        kind: str,
        *,
        rho: float | None,
        omega: float | None,
        epsilon: float | None,
        max_outer: int | None,
    ) -> tuple[SolverSettings, SolverParams]:
        settings = self.settings.merged(
            rho=rho, omega=omega, epsilon=epsilon, max_outer=max_outer
        )
        try:
            return settings, settings.to_params(kind)
        except ValueError as exc:
            raise click.ClickException(f"Invalid solver parameters: {exc}") from exc


def _solver_overrides(command: F) -> F:
    options = [
        click.option("--rho", type=float, help="Penalty parameter ρ (> 0)."),
        click.option("--omega", type=float, help="Multiplier step ω in (0, 2]."),
        click.option("--epsilon", type=float, help="Stopping threshold on ‖x − y‖²."),
        click.option("--max-outer", "max_outer", type=int, help="Outer iteration cap."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _path_option(name: str, help_text: str, *, required: bool = False) -> Callable[[F], F]:
    return click.option(
        name,
        type=click.Path(dir_okay=False, path_type=Path),
        required=required,
        help=help_text,
    )


def _load(path: Path) -> InstanceDocument:
    if not path.exists():
        raise click.ClickException(f"Instance file {path} does not exist.")
    try:
        return load_instance(path)
    except _INSTANCE_ERRORS as exc:
        raise click.ClickException(f"Could not read instance {path}: {exc}") from exc


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Solver settings TOML (defaults to $SSAL_CONFIG, then ./config/solver.toml).",
)
@click.version_option(__version__, prog_name="ssal")
@click.pass_context
def app(ctx: click.Context, config_path: Path | None) -> None:
    """Generate, solve and cross-check sparse semicontinuous problems."""

    try:
        configure_logging()
        settings = load_settings(config_path)
    except (OSError, tomllib.TOMLDecodeError, ValueError) as exc:
        raise click.ClickException(f"Could not initialise: {exc}") from exc
    ctx.obj = CLIState(settings=settings)


def _generate(
    family: str,
    n: int,
    *,
    m: int,
    p: int | None,
    K: int | None,
    sigma2: float,
    seed: int,
    with_risk: bool,
) -> PortfolioInstance | CsInstance:
    if family == "portfolio":
        params = PortfolioParams(K=10 if K is None else K, with_risk=with_risk)
        return gen_portfolio(n, m, seed, params)
    measurements = n // 2 if p is None else p
    return gen_cs(measurements, n, max(1, n // 10) if K is None else K, sigma2, seed)


@app.command()
@click.argument("family", type=click.Choice(["portfolio", "cs"]))
@click.option("--n", "n", type=int, required=True, help="Problem dimension.")
@click.option("--m", "m", type=int, default=10, show_default=True, help="Factor count.")
@click.option("--p", "p", type=int, help="Measurement count for cs (default n // 2).")
@click.option("--K", "K", type=int, help="Cardinality budget (default 10, or n // 10 for cs).")
@click.option("--sigma2", type=float, default=0.01, show_default=True, help="Noise variance.")
@click.option("--seed", type=int, default=0, show_default=True, help="Generator seed.")
@click.option("--with-risk", is_flag=True, help="Add the xᵀDx ≤ σ₀ block to portfolios.")
@_path_option("--out", "Destination instance JSON.", required=True)
def gen(
    family: str,
    n: int,
    m: int,
    p: int | None,
    K: int | None,
    sigma2: float,
    seed: int,
    with_risk: bool,
    out: Path,
) -> None:
    """Write a seeded portfolio or compressed-sensing instance."""

    try:
        instance = _generate(
            family, n, m=m, p=p, K=K, sigma2=sigma2, seed=seed, with_risk=with_risk
        )
    except (ValueError, GeneratorError) as exc:
        raise click.ClickException(str(exc)) from exc
    document = instance.to_document()
    dump_instance(document, out)
    click.echo(f"Wrote instance {document.instance_id} to {out}.")


def _solve_row(
    document: InstanceDocument,
    params: SolverParams,
    report: SolveReport,
    mse_value: float | None,
) -> dict[str, Any]:
    return {
        "instance_id": document.instance_id,
        "n": document.spec.n,
        "K": document.spec.y_set.K,
        "rho": params.rho,
        "omega": params.omega,
        "epsilon": params.epsilon,
        "iterations": report.outer_iterations,
        "converged": report.converged,
        "objective_x": report.objective_x,
        "objective_polished": report.objective_polished,
        "primal_residual": report.primal_residual_final,
        "stationarity_residual": report.stationarity_residual,
        "wall_time_s": report.wall_time,
        "mse": mse_value,
    }


@app.command()
@_path_option("--instance", "Instance JSON to solve.", required=True)
@_path_option("--out", "Write the JSON report here instead of stdout.")
@_path_option("--csv", "Append one summary row to this CSV file.")
@_solver_overrides
@click.pass_context
def solve(
    ctx: click.Context,
    instance: Path,
    out: Path | None,
    csv: Path | None,
    rho: float | None,
    omega: float | None,
    epsilon: float | None,
    max_outer: int | None,
) -> None:
    """Run SSAL on an instance. Exit 0 when converged, 2 when max-outer was reached."""

    state: CLIState = ctx.obj
    document = _load(instance)
    kind = document.spec.objective.kind
    settings, params = state.params_for(
        kind, rho=rho, omega=omega, epsilon=epsilon, max_outer=max_outer
    )
    try:
        report = run(document.spec, params)
    except (SolveError, ValueError) as exc:
        raise click.ClickException(f"Solve failed: {exc}") from exc
    mse_value = mse(document.f_true, report.x_polished) if document.f_true is not None else None
    payload = {
        "instance_id": document.instance_id,
        "params": settings.echo(kind),
        "mse": mse_value,
        "report": report.to_dict(),
    }
    write_json(payload, out)
    if csv is not None:
        append_csv_row(SOLVE_COLUMNS, _solve_row(document, params, report, mse_value), csv)
    ctx.exit(0 if report.converged else EXIT_NOT_CONVERGED)


@app.command()
@_path_option("--instance", "Instance JSON to solve exactly.", required=True)
@_path_option("--out", "Write the JSON result here instead of stdout.")
@click.pass_obj
def oracle(state: CLIState, instance: Path, out: Path | None) -> None:
    """Solve a small instance (n ≤ 24) exactly by support enumeration."""

    document = _load(instance)
    try:
        result = global_solve(document.spec, state.settings.inner)
    except (SizeCapError, GlobalInfeasibleError, InnerSolverError) as exc:
        raise click.ClickException(f"Exact solve failed: {exc}") from exc
    try:
        stationarity: float | None = stationarity_residual(document.spec, result.x_star).residual
    except FeasibilityError:
        stationarity = None
    payload = {
        "instance_id": document.instance_id,
        **result.to_dict(),
        "stationarity_residual": stationarity,
    }
    write_json(payload, out)


@dataclass(slots=True)
class _CheckRow:
    seed: int
    projection_delta: float
    projection_ok: bool
    ssal_objective: float | None = None
    oracle_objective: float | None = None
    gap: float | None = None
    note: str = ""


def _fmt(value: float | None, spec: str = ".3e") -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return format(value, spec)


@app.command()
@click.option("--n", "n", type=int, default=8, show_default=True, help="Instance dimension.")
@click.option("--K", "K", type=int, default=3, show_default=True, help="Cardinality budget.")
@click.option("--p", "p", type=int, help="Measurements of the SSAL instances (default 2n/3).")
@click.option("--repeat", type=int, default=100, show_default=True, help="Number of seeds.")
@click.option("--seed", type=int, default=0, show_default=True, help="First seed.")
@click.option("--sigma2", type=float, default=0.01, show_default=True, help="Noise variance.")
@click.option(
    "--ssal/--no-ssal",
    "with_ssal",
    default=True,
    show_default=True,
    help="Also compare SSAL against the oracle on compressed-sensing instances.",
)
@click.option("--inject-mismatch", is_flag=True, hidden=True)
@_solver_overrides
@click.pass_context
def check(
    ctx: click.Context,
    n: int,
    K: int,
    p: int | None,
    repeat: int,
    seed: int,
    sigma2: float,
    with_ssal: bool,
    inject_mismatch: bool,
    rho: float | None,
    omega: float | None,
    epsilon: float | None,
    max_outer: int | None,
) -> None:
    """Cross-check the projection and SSAL against exhaustive enumeration."""

    state: CLIState = ctx.obj
    if n > MAX_ORACLE_N:
        raise click.ClickException(f"n={n} exceeds the oracle cap of {MAX_ORACLE_N}.")
    if not 1 <= K <= n or repeat < 1:
        raise click.ClickException("check needs 1 <= K <= n and repeat >= 1.")
    _, params = state.params_for(
        "least_squares", rho=rho, omega=omega, epsilon=epsilon, max_outer=max_outer
    )
    measurements = max(1, (2 * n) // 3) if p is None else p
    levels = SemicontinuousSet(np.full(n, 0.1), np.full(n, 1.0), K)

    rows: list[_CheckRow] = []
    for index, current in enumerate(range(seed, seed + repeat)):
        target = standard_normal(make_generator(current), n)
        exact = projection_oracle(target, levels).objective
        if inject_mismatch and index == 0:
            exact += 1e-6
        delta = abs(projection_distance(target, levels) - exact)
        row = _CheckRow(current, delta, delta <= PROJECTION_TOL)
        if with_ssal:
            _compare_with_oracle(row, measurements, n, K, sigma2, params)
        rows.append(row)

    table = Table(title=f"ssal check (n={n}, K={K}, seeds {seed}..{seed + repeat - 1})")
    for column in ("seed", "proj |Δ|", "proj", "ssal obj", "oracle obj", "gap", "note"):
        table.add_column(column)
    for row in rows:
        table.add_row(
            str(row.seed),
            _fmt(row.projection_delta),
            "ok" if row.projection_ok else "MISMATCH",
            _fmt(row.ssal_objective, ".6g"),
            _fmt(row.oracle_objective, ".6g"),
            _fmt(row.gap, ".2%"),
            row.note,
        )
    console = Console()
    console.print(table)
    mismatches = sum(not row.projection_ok for row in rows)
    gaps = [row.gap for row in rows if row.gap is not None and math.isfinite(row.gap)]
    median_gap = statistics.median(gaps) if gaps else None
    console.print(
        f"projection mismatches: {mismatches}/{len(rows)}; "
        f"median SSAL gap: {_fmt(median_gap, '.2%')}"
    )
    ctx.exit(EXIT_CHECK_FAILED if mismatches else 0)


def _compare_with_oracle(
    row: _CheckRow, p: int, n: int, K: int, sigma2: float, params: SolverParams
) -> None:
    try:
        instance = gen_cs(p, n, K, sigma2, row.seed)
        report = run(instance.spec, params)
        best = global_solve(instance.spec, params.inner)
    except (
        ValueError,
        GeneratorError,
        SolveError,
        GlobalInfeasibleError,
        InnerSolverError,
    ) as exc:
        row.note = f"error: {exc}"
        return
    row.oracle_objective = best.objective
    row.ssal_objective = report.objective_polished
    if report.polish_error is not None:
        row.note = "polish failed"
        return
    row.gap = relative_difference(report.objective_polished, best.objective)
    if not report.converged:
        row.note = "not converged"


def _bench_instance(
    family: str,
    n: int,
    K: int,
    *,
    m: int,
    p: int,
    sigma2: float,
    with_risk: bool,
    params: SolverParams,
    seed: int,
) -> dict[str, Any]:
    row: dict[str, Any] = {
        "row_type": "instance",
        "kind": family,
        "n": n,
        "K": K,
        "seed": seed,
    }
    try:
        instance = _generate(
            family, n, m=m, p=p, K=K, sigma2=sigma2, seed=seed, with_risk=with_risk
        )
        report = run(instance.spec, params)
    except (ValueError, GeneratorError, SolveError) as exc:
        row.update(converged=False, error=str(exc))
        return row
    row.update(
        iterations=report.outer_iterations,
        converged=report.converged,
        wall_time_s=report.wall_time,
        objective_polished=report.objective_polished,
        error=report.polish_error,
    )
    if isinstance(instance, CsInstance):
        mse_ssal = mse(instance.f_true, report.x_polished)
        mse_baseline = mse(instance.f_true, baseline_hard_threshold(instance))
        row.update(mse_ssal=mse_ssal, mse_baseline=mse_baseline)
        if mse_ssal > 0 and mse_baseline > 0:
            row["log10_mse_ratio"] = log10_ratio(mse_baseline, mse_ssal)
    return row


def _mean(values: Sequence[float]) -> float | None:
    return statistics.fmean(values) if values else None


def _summary_row(family: str, n: int, K: int, rows: Sequence[dict[str, Any]]) -> dict[str, Any]:
    solved = [row for row in rows if "iterations" in row]
    iterations = [float(row["iterations"]) for row in solved]
    times = [float(row["wall_time_s"]) for row in solved]
    summary: dict[str, Any] = {
        "row_type": "summary",
        "kind": family,
        "n": n,
        "K": K,
        "converged": bool(rows) and all(row.get("converged") for row in rows),
        "instances": len(rows),
        "failures": len(rows) - len(solved),
        "iterations_min": int(min(iterations)) if iterations else None,
        "iterations_max": int(max(iterations)) if iterations else None,
        "iterations_mean": _mean(iterations),
        "wall_time_min": min(times) if times else None,
        "wall_time_max": max(times) if times else None,
        "wall_time_mean": _mean(times),
    }
    if family == "cs":
        mse_ssal = _mean([row["mse_ssal"] for row in solved])
        mse_baseline = _mean([row["mse_baseline"] for row in solved])
        summary.update(mse_ssal=mse_ssal, mse_baseline=mse_baseline)
        if mse_ssal and mse_baseline:
            summary["log10_mse_ratio"] = log10_ratio(mse_baseline, mse_ssal)
    return summary


@app.command()
@click.argument("family", type=click.Choice(["portfolio", "cs"]))
@click.option("--n", "sizes", type=int, multiple=True, required=True, help="Dimension(s).")
@click.option("--K", "budgets", type=int, multiple=True, help="Cardinality budget(s).")
@click.option("--m", "m", type=int, default=10, show_default=True, help="Factor count.")
@click.option("--p", "p", type=int, help="Measurement count for cs (default n // 2).")
@click.option("--sigma2", type=float, default=0.01, show_default=True, help="Noise variance.")
@click.option("--seed", type=int, default=0, show_default=True, help="First seed.")
@click.option("--repeat", type=int, default=10, show_default=True, help="Seeds per size.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Concurrent solves.")
@click.option("--with-risk", is_flag=True, help="Add the xᵀDx ≤ σ₀ block to portfolios.")
@_path_option("--out", "Write the CSV here instead of stdout.")
@_solver_overrides
@click.pass_obj
def bench(
    state: CLIState,
    family: str,
    sizes: Iterable[int],
    budgets: Iterable[int],
    m: int,
    p: int | None,
    sigma2: float,
    seed: int,
    repeat: int,
    jobs: int,
    with_risk: bool,
    out: Path | None,
    rho: float | None,
    omega: float | None,
    epsilon: float | None,
    max_outer: int | None,
) -> None:
    """Run seeded instances and summarize iterations, wall time and recovery error."""

    if repeat < 1 or jobs < 1:
        raise click.ClickException("repeat and jobs must be at least 1.")
    _, params = state.params_for(
        _FAMILY_KIND[family], rho=rho, omega=omega, epsilon=epsilon, max_outer=max_outer
    )
    seeds = range(seed, seed + repeat)
    rows: list[dict[str, Any]] = []
    summaries: list[dict[str, Any]] = []
    for n in sizes:
        for K in budgets or (10 if family == "portfolio" else max(1, n // 10),):
            solve_one = partial(
                _bench_instance,
                family,
                n,
                K,
                m=m,
                p=n // 2 if p is None else p,
                sigma2=sigma2,
                with_risk=with_risk,
                params=params,
            )
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(lambda s: solve_one(seed=s), seeds))
            summary = _summary_row(family, n, K, results)
            rows.extend(results)
            rows.append(summary)
            summaries.append(summary)
    write_csv(BENCH_COLUMNS, rows, out)
    if out is not None:
        _print_bench_summary(summaries)


def _print_bench_summary(summaries: Sequence[dict[str, Any]]) -> None:
    table = Table(title="ssal bench")
    for column in ("kind", "n", "K", "runs", "failed", "iters min/max/mean", "time mean (s)"):
        table.add_column(column)
    for row in summaries:
        iterations = "-"
        if row["iterations_min"] is not None:
            iterations = (
                f"{row['iterations_min']}/{row['iterations_max']}/{row['iterations_mean']:.1f}"
            )
        table.add_row(
            row["kind"],
            str(row["n"]),
            str(row["K"]),
            str(row["instances"]),
            str(row["failures"]),
            iterations,
            _fmt(row["wall_time_mean"], ".3f"),
        )
    Console().print(table)


def main() -> None:
    """Entry point for console_scripts."""

    app(standalone_mode=True)
