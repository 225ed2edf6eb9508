"""CLI interface for sphrep."""

import contextlib
import logging
import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import StrEnum
from pathlib import Path
from typing import Any

import numpy as np
import typer

from sphrep import __version__
from sphrep.core.certificates import (
    WeightProfile,
    certificate_report,
    girth_representation,
    random_regular_representation,
    weight_repair,
)
from sphrep.core.edgelist import read_edge_list
from sphrep.core.exceptions import (
    CertificateInvalidError,
    GirthTooSmallError,
    InvalidOptionsError,
    NoPairingError,
    NotConnectedError,
    SphrepError,
    StarViolatedError,
)
from sphrep.core.generators import get_graph, list_generators
from sphrep.core.graph import (
    Graph,
    count_cycles_upto,
    expected_cycle_count,
    girth,
    is_connected,
    random_regular,
)
from sphrep.core.projection import project, projection_expectation_check
from sphrep.core.render import render_svg
from sphrep.core.reports import dumps, envelope, input_block, write_json, write_text
from sphrep.core.representation import adjacency_spectrum, spectral_drawing
from sphrep.core.solver import (
    SolverOptions,
    dual_certificate_regular,
    solution_report,
    solve_primal,
    upper_bound_regular,
)

__all__ = ["main", "main_callback"]


logger = logging.getLogger(__name__)

SANDWICH_TOL = 1e-6
SEED_ENVVAR = "SPHREP_SEED"

app = typer.Typer(
    name="sphrep",
    help="Spherical graph representations: solve, certify, bound and draw.",
    no_args_is_help=True,
)


class DrawMethod(StrEnum):
    SDP = "sdp"
    SPECTRAL = "spectral"


def _version_callback(value: bool) -> None:
    if value:
        typer.echo(f"sphrep {__version__}")
        raise typer.Exit(0)


@app.callback()
def main_callback(
    log_level: str = typer.Option(
        "WARNING", "--log-level", envvar="SPHREP_LOG_LEVEL", help="Logging level"
    ),
    _version: bool = typer.Option(
        False,
        "--version",
        "-V",
        help="Show sphrep version and exit",
        callback=_version_callback,
        is_eager=True,
    ),
) -> None:
    """Spherical graph representations: solve, certify, bound and draw."""
    level = logging.getLevelNamesMapping().get(log_level.upper())
    if level is None:
        typer.echo(f"Error: Unknown log level: {log_level}", err=True)
        raise typer.Exit(1)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# =============================================================================
# Shared plumbing
# =============================================================================


@contextlib.contextmanager
def _exit_on_error() -> Iterator[None]:
    try:
        yield
    except SphrepError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(e.exit_code) from e


def _load_graph(input_path: Path | None, gen: str | None) -> tuple[Graph, str]:
    """Exactly one of an edge-list file and a generator spec."""
    if (input_path is None) == (gen is None):
        msg = "Give exactly one input: an edge-list file or --gen name[:params]"
        raise InvalidOptionsError(msg)
    if gen is not None:
        return get_graph(gen), f"gen:{gen}"
    assert input_path is not None  # noqa: S101
    return read_edge_list(input_path), str(input_path)


def _emit(report: dict[str, Any], path: Path | None) -> None:
    if path is None:
        typer.echo(dumps(report), nl=False)
    else:
        write_json(path, report)
        typer.echo(f"Report written to {path}")


def _solver_options(
    *,
    seed: int,
    rank: int | None,
    tol: float,
    max_iters: int,
    max_rounds: int,
    restarts: int,
) -> SolverOptions:
    return SolverOptions(
        rank=rank,
        tol_feas=tol,
        max_inner=max_iters,
        max_outer=max_rounds,
        restarts=restarts,
        seed=seed,
    )


def _tolerances(opts: SolverOptions) -> dict[str, float]:
    return {"tol_feas": opts.tol_feas, "tol_obj": opts.tol_obj, "sandwich": SANDWICH_TOL}


INPUT_ARGUMENT = typer.Argument(None, help="Edge-list file (first line 'n m')", show_default=False)
GEN_OPTION = typer.Option(None, "--gen", "-g", help="Generator spec, e.g. petersen or cycle:20")
SEED_OPTION = typer.Option(0, "--seed", "-s", envvar=SEED_ENVVAR, help="Random seed")
RANK_OPTION = typer.Option(None, "--rank", help="Factor rows (default ceil(sqrt(2n))+1)")
TOL_OPTION = typer.Option(1e-8, "--tol", help="Feasibility tolerance for J∙X and unit columns")
MAX_ITERS_OPTION = typer.Option(500, "--max-iters", help="Sweeps per augmented-Lagrangian round")
MAX_ROUNDS_OPTION = typer.Option(50, "--max-rounds", help="Augmented-Lagrangian rounds")
RESTARTS_OPTION = typer.Option(3, "--restarts", help="Random restarts; the best one is kept")
REPORT_OPTION = typer.Option(None, "--report", "-r", help="Write the JSON report to this file")


# =============================================================================
# Commands
# =============================================================================


@app.command()
def rho(
    input_path: Path | None = INPUT_ARGUMENT,
    gen: str | None = GEN_OPTION,
    seed: int = SEED_OPTION,
    rank: int | None = RANK_OPTION,
    tol: float = TOL_OPTION,
    max_iters: int = MAX_ITERS_OPTION,
    max_rounds: int = MAX_ROUNDS_OPTION,
    restarts: int = RESTARTS_OPTION,
    report: Path | None = REPORT_OPTION,
) -> None:
    """Solve for ρ(G); regular graphs also get a dual certificate and gap."""
    with _exit_on_error():
        graph, source = _load_graph(input_path, gen)
        opts = _solver_options(
            seed=seed,
            rank=rank,
            tol=tol,
            max_iters=max_iters,
            max_rounds=max_rounds,
            restarts=restarts,
        )
        solution = solve_primal(graph, opts)
        certificate = None
        if graph.is_regular and is_connected(graph):
            certificate = dual_certificate_regular(graph)
        _emit(
            envelope(
                "rho",
                version=__version__,
                seed=seed,
                tolerances=_tolerances(opts),
                inputs=input_block(source, graph),
                options=opts.to_json(),
                solution=solution_report(solution, certificate),
            ),
            report,
        )
        solution.ensure_converged()


@app.command()
def draw(
    input_path: Path | None = INPUT_ARGUMENT,
    gen: str | None = GEN_OPTION,
    method: DrawMethod = typer.Option(DrawMethod.SDP, "--method", "-m", help="Layout source"),
    dim: int = typer.Option(2, "--dim", "-k", help="Target dimension; only 2 renders SVG"),
    seed: int = SEED_OPTION,
    rank: int | None = RANK_OPTION,
    tol: float = TOL_OPTION,
    max_iters: int = MAX_ITERS_OPTION,
    max_rounds: int = MAX_ROUNDS_OPTION,
    restarts: int = RESTARTS_OPTION,
    out: Path | None = typer.Option(None, "--out", "-o", help="Output file (default stdout)"),
) -> None:
    """Draw a representation: SVG for --dim 2, matrix JSON otherwise."""
    with _exit_on_error():
        graph, _ = _load_graph(input_path, gen)
        solution = None
        if method is DrawMethod.SPECTRAL:
            layout = spectral_drawing(graph, dim)
        else:
            opts = _solver_options(
                seed=seed,
                rank=rank,
                tol=tol,
                max_iters=max_iters,
                max_rounds=max_rounds,
                restarts=restarts,
            )
            solution = solve_primal(graph, opts)
            layout = project(solution.rep, dim, seed)

        document = render_svg(graph, layout) if dim == 2 else dumps(layout.to_json())
        if out is None:
            typer.echo(document, nl=False)
        else:
            write_text(out, document)
        if solution is not None:
            solution.ensure_converged()


def _lower_bound(graph: Graph, k: int) -> dict[str, Any]:
    try:
        certificate = girth_representation(graph, k)
    except (GirthTooSmallError, NoPairingError) as e:
        return {"k": k, "lower_bound": None, "rho_certificate": None, "reason": str(e)}
    return {
        "k": k,
        "lower_bound": certificate.closed_form,
        "rho_certificate": certificate.rho,
        "reason": None,
    }


@app.command()
def bound(
    input_path: Path | None = INPUT_ARGUMENT,
    gen: str | None = GEN_OPTION,
    k: int | None = typer.Option(None, "--k", help="Radius for the girth lower bound"),
    report: Path | None = REPORT_OPTION,
) -> None:
    """The λ₂ upper bound and, with --k, the girth lower bound and its certificate."""
    with _exit_on_error():
        graph, source = _load_graph(input_path, gen)
        upper = upper_bound_regular(graph)
        spectral = adjacency_spectrum(graph)
        lower = _lower_bound(graph, k) if k is not None else None
        if lower is not None and lower["rho_certificate"] is not None:
            _check_sandwich(lower["rho_certificate"], upper)
        _emit(
            envelope(
                "bound",
                version=__version__,
                seed=None,
                tolerances={"sandwich": SANDWICH_TOL},
                inputs=input_block(source, graph),
                degree=graph.regular_degree,
                girth=girth(graph),
                connected=is_connected(graph),
                lambda1=spectral.lambda1,
                lambda2=spectral.lambda2,
                upper_bound=upper,
                lower=lower,
            ),
            report,
        )


def _check_sandwich(certificate_rho: float, upper: float) -> None:
    if certificate_rho > upper + SANDWICH_TOL:
        msg = f"Certificate ρ = {certificate_rho:.9f} exceeds the upper bound {upper:.9f}"
        raise CertificateInvalidError(msg)


@app.command()
def nilli(
    input_path: Path | None = INPUT_ARGUMENT,
    gen: str | None = GEN_OPTION,
    k: int = typer.Option(1, "--k", help="Radius of the Nilli vectors"),
    report: Path | None = REPORT_OPTION,
) -> None:
    """Build the Nilli-vector certificate: pairing, bad edges, repair, exact ρ."""
    with _exit_on_error():
        graph, source = _load_graph(input_path, gen)
        if not is_connected(graph):
            msg = "The Nilli certificate report needs a connected graph"
            raise NotConnectedError(msg)
        upper = upper_bound_regular(graph)
        certificate = random_regular_representation(graph, k)
        body = certificate_report(graph, certificate, upper)
        _emit(
            envelope(
                "nilli",
                version=__version__,
                seed=None,
                tolerances={"sandwich": SANDWICH_TOL},
                inputs=input_block(source, graph),
                certificate=body,
                bad_edge_list=sorted(certificate.bad),
            ),
            report,
        )
        _check_sandwich(certificate.rho, upper)


# =============================================================================
# Experiments
# =============================================================================


@dataclass(frozen=True)
class _SampleTask:
    n: int
    d: int
    k: int
    seed: int
    solve: bool
    opts: SolverOptions


def _random_regular_sample(task: _SampleTask) -> dict[str, Any]:
    """One row of the random-regular experiment; runs in a worker process."""
    graph = random_regular(task.n, task.d, task.seed)
    census = count_cycles_upto(graph, max(3, 2 * task.k + 2))
    row: dict[str, Any] = {
        "seed": task.seed,
        "cycles": {str(j): census.count(j) for j in range(3, census.max_length + 1)},
        "connected": is_connected(graph),
    }
    row["lambda2"] = adjacency_spectrum(graph).lambda2
    row["upper_bound"] = upper_bound_regular(graph)
    try:
        certificate = random_regular_representation(graph, task.k)
    except (NoPairingError, StarViolatedError) as e:
        row |= {"rho_certificate": None, "certificate_error": str(e)}
    else:
        row |= {
            "rho_certificate": certificate.rho,
            "good_pairs": certificate.good_pairs,
            "bad_edges": len(certificate.bad),
            "repair_touches_edges": certificate.repair_touches_edges,
        }
    if task.solve:
        solution = solve_primal(graph, task.opts)
        row |= {"rho_solver": solution.objective, "converged": solution.converged}
    row["sandwich"] = _sandwich_holds(row)
    return row


def _sandwich_holds(row: dict[str, Any]) -> bool:
    chain = [row.get("rho_certificate"), row.get("rho_solver"), row["upper_bound"]]
    values = [value for value in chain if value is not None]
    return all(a <= b + SANDWICH_TOL for a, b in zip(values, values[1:], strict=False))


def _mean_and_error(values: list[float]) -> dict[str, float | None]:
    if not values:
        return {"mean": None, "standard_error": None}
    data = np.asarray(values, dtype=np.float64)
    error = float(data.std(ddof=1) / math.sqrt(data.size)) if data.size > 1 else 0.0
    return {"mean": float(data.mean()), "standard_error": error}


def _aggregate(rows: list[dict[str, Any]], n: int, d: int) -> dict[str, Any]:
    half = n / 2
    cycles: dict[str, Any] = {}
    for j in rows[0]["cycles"] if rows else []:
        summary = _mean_and_error([row["cycles"][j] for row in rows])
        expected = expected_cycle_count(d, int(j))
        within = None
        if summary["mean"] is not None and summary["standard_error"] is not None:
            within = abs(summary["mean"] - expected) <= 3 * summary["standard_error"]
        cycles[j] = {**summary, "expected": expected, "within_3se": within}

    def normalised(key: str) -> dict[str, float | None]:
        return _mean_and_error([row[key] / half for row in rows if row.get(key) is not None])

    return {
        "cycles": cycles,
        "lambda2": _mean_and_error([row["lambda2"] for row in rows]),
        "upper_bound_normalised": normalised("upper_bound"),
        "rho_certificate_normalised": normalised("rho_certificate"),
        "rho_solver_normalised": normalised("rho_solver"),
        "ramanujan_level": 2 * math.sqrt(d - 1),
        "sandwich_violations": sum(1 for row in rows if not row["sandwich"]),
    }


@app.command("random-regular")
def random_regular_command(
    n: int = typer.Option(..., "--n", help="Vertex count"),
    d: int = typer.Option(..., "--d", help="Degree"),
    count: int = typer.Option(10, "--count", "-c", help="Number of samples"),
    k: int = typer.Option(1, "--k", help="Radius for cycle census and certificate"),
    seed: int = SEED_OPTION,
    solve: bool = typer.Option(True, "--solve/--no-solve", help="Also run the solver"),
    workers: int = typer.Option(1, "--workers", "-w", help="Worker processes"),
    rank: int | None = RANK_OPTION,
    tol: float = TOL_OPTION,
    max_iters: int = MAX_ITERS_OPTION,
    max_rounds: int = MAX_ROUNDS_OPTION,
    restarts: int = RESTARTS_OPTION,
    report: Path | None = REPORT_OPTION,
) -> None:
    """Sample random regular graphs: cycle census, bounds, certificate and solver ρ.

    Sample ``i`` uses seed ``seed + i``; rows are reported in sample order.
    """
    with _exit_on_error():
        if count < 1 or workers < 1:
            msg = f"--count and --workers must be positive, got {count} and {workers}"
            raise InvalidOptionsError(msg)
        opts = _solver_options(
            seed=seed,
            rank=rank,
            tol=tol,
            max_iters=max_iters,
            max_rounds=max_rounds,
            restarts=restarts,
        )
        tasks = [
            _SampleTask(n, d, k, seed + i, solve, replace(opts, seed=seed + i))
            for i in range(count)
        ]
        if workers == 1:
            rows = [_random_regular_sample(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_random_regular_sample, tasks))

        summary = _aggregate(rows, n, d)
        _emit(
            envelope(
                "random-regular",
                version=__version__,
                seed=seed,
                tolerances=_tolerances(opts),
                inputs={"source": f"random:{n},{d}", "n": n, "d": d, "count": count},
                k=k,
                options=opts.to_json() if solve else None,
                summary=summary,
                samples=rows,
            ),
            report,
        )
        if summary["sandwich_violations"]:
            msg = f"{summary['sandwich_violations']} samples violate certificate <= solver <= bound"
            raise CertificateInvalidError(msg)


@app.command("project-check")
def project_check(
    n: int = typer.Option(10, "--n", help="Ambient dimension"),
    x: float = typer.Option(1.0, "--x", help="Segment length"),
    trials: int = typer.Option(100_000, "--trials", "-t", help="Monte-Carlo trials"),
    seed: int = SEED_OPTION,
    bins: int = typer.Option(30, "--bins", help="Angle histogram bins"),
    report: Path | None = REPORT_OPTION,
) -> None:
    """Mean squared length of a random 2-D projection of a segment, against 2x²/n."""
    with _exit_on_error():
        check = projection_expectation_check(n, x, trials, seed, bins)
        _emit(
            envelope(
                "project-check",
                version=__version__,
                seed=seed,
                tolerances={"sigmas": 3.0},
                result=check.to_json(),
            ),
            report,
        )


@app.command("repair-demo")
def repair_demo(
    n: int = typer.Option(10, "--n", help="Number of vertices"),
    seed: int = SEED_OPTION,
    violate: bool = typer.Option(False, "--violate", help="Break f(v) <= f(V)/2 on vertex 0"),
    report: Path | None = REPORT_OPTION,
) -> None:
    """Repair a random weight profile into squared edge weights on K_n."""
    with _exit_on_error():
        if n < 2:
            msg = f"--n must be at least 2, got {n}"
            raise InvalidOptionsError(msg)
        f = np.random.default_rng(seed).exponential(size=n)
        rest = f.sum() - f.max()
        f[np.argmax(f)] = min(f.max(), rest)
        if violate:
            f[0] = f[1:].sum() + 1.0
        profile = WeightProfile(tuple(f.tolist()))
        repaired = weight_repair(profile)
        error = float(np.max(np.abs(repaired.vertex_sums() - f)))
        _emit(
            envelope(
                "repair-demo",
                version=__version__,
                seed=seed,
                tolerances={"vertex_sum": 1e-9},
                profile=list(profile.f),
                weights=[[u, v, g] for (u, v), g in repaired.weights.items()],
                steps=repaired.steps,
                max_vertex_sum_error=error,
            ),
            report,
        )


@app.command()
def graphs() -> None:
    """List the graph generators usable with --gen."""
    for usage, description in list_generators():
        typer.echo(f"  {usage:24} - {description}")


def main() -> None:
    """Entry point for the CLI."""
    app()


