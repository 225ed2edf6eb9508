"""Low-rank solver for the ρ(G) program and its dual certificates.

The primal program is ``max ½A∙X`` subject to ``X_vv = 1``, ``J∙X = 0`` and
``X ⪰ 0``. Writing ``X = RᵀR`` with ``r`` rows turns the diagonal constraints
into unit columns. The barycentre constraint ``J∙X = ‖Σ_v r(v)‖²`` is handled
by an augmented Lagrangian

    L(R) = ρ(G, R) - ⟨μ, s⟩ - σ‖s‖²,    s = Σ_v r(v),

maximised by cyclic column updates: with every other column fixed ``L`` is
linear in ``r(v)``, so the exact maximiser over the unit sphere is the
normalised gradient ``Σ_{u~v} r(u) - μ - 2σ s_{-v}``. Each update can only
raise ``L``. Between rounds ``μ`` takes a multiplier step and ``σ`` grows while
the barycentre residual is above tolerance. A round ends once the gain over
the last few sweeps drops below a tolerance that starts loose and tightens
round by round down to ``tol_obj``; only a round at full tolerance can
converge.

For regular graphs the dual point ``y_v = λ₂/2``, ``y₀ = (λ₁-λ₂)/(2n)``
certifies the bound ``λ₂·v(G)/2``; a zero gap proves the factor optimal.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
import numpy as np
import numpy.typing as npt

from sphrep.core.exceptions import (
    CertificateInvalidError,
    GraphMismatchError,
    InvalidOptionsError,
    NotConnectedError,
    NotConvergedError,
    NotRegularError,
    TrivialGraphError,
)
from sphrep.core.graph import Graph, is_connected
from sphrep.core.linalg import SpectralData, sym_eigen
from sphrep.core.representation import (
    RepresentationMatrix,
    adjacency_spectrum,
    rho_edges,
    validate,
)

__all__ = [
    "CERTIFICATE_TOL",
    "DualCertificate",
    "PrimalSolution",
    "SolverOptions",
    "default_rank",
    "dual_certificate_regular",
    "duality_gap",
    "eigenvector_residuals",
    "evaluate_dual",
    "solution_report",
    "solve_primal",
    "strict_feasible_point",
    "upper_bound_regular",
]


logger = logging.getLogger(__name__)

CERTIFICATE_TOL = 1e-8
WEAK_DUALITY_TOL = 1e-8
ZERO_DIRECTION = 1e-14
INITIAL_INNER_TOL = 1e-4
INNER_TOL_DECAY = 0.1
STALL_WINDOW = 3


def default_rank(n: int) -> int:
    """⌈√(2n)⌉ + 1 rows; an optimal factor of this rank always exists."""
    return math.ceil(math.sqrt(2 * n)) + 1


@dataclass(frozen=True)
class SolverOptions:
    """Knobs of the augmented-Lagrangian coordinate ascent.

    ``rank=None`` means :func:`default_rank` of the graph's order.
    """

    rank: int | None = None
    tol_feas: float = 1e-8
    tol_obj: float = 1e-9
    max_outer: int = 50
    max_inner: int = 500
    penalty_init: float = 1.0
    penalty_growth: float = 2.0
    penalty_max: float = 1e6
    restarts: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        problems: list[str] = []
        if self.rank is not None and self.rank < 1:
            problems.append(f"rank must be >= 1 (got {self.rank})")
        if self.tol_feas <= 0 or self.tol_obj <= 0:
            problems.append("tolerances must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            problems.append("iteration caps must be >= 1")
        if self.penalty_init <= 0 or self.penalty_max < self.penalty_init:
            problems.append("need 0 < penalty_init <= penalty_max")
        if self.penalty_growth <= 1:
            problems.append(f"penalty_growth must be > 1 (got {self.penalty_growth})")
        if self.restarts < 1:
            problems.append(f"restarts must be >= 1 (got {self.restarts})")
        if problems:
            msg = "Invalid solver options: " + "; ".join(problems)
            raise InvalidOptionsError(msg)

    def rank_for(self, n: int) -> int:
        return self.rank if self.rank is not None else default_rank(n)

    def to_json(self) -> dict[str, Any]:
        return {
            "rank": self.rank,
            "tol_feas": self.tol_feas,
            "tol_obj": self.tol_obj,
            "max_outer": self.max_outer,
            "max_inner": self.max_inner,
            "penalty_init": self.penalty_init,
            "penalty_growth": self.penalty_growth,
            "penalty_max": self.penalty_max,
            "restarts": self.restarts,
        }


@dataclass(frozen=True, eq=False)
class PrimalSolution:
    """Best factor found; ``trace[i]`` holds L after each sweep of round ``i``.

    Each trace round starts with the value before its first sweep.
    """

    rep: RepresentationMatrix
    objective: float
    residual_unit: float
    residual_barycentre: float
    iterations: int
    converged: bool
    graph_fingerprint: str
    restart: int = 0
    trace: tuple[tuple[float, ...], ...] = field(default=(), repr=False)

    def ensure_converged(self) -> None:
        if not self.converged:
            msg = (
                f"Solver did not converge after {self.iterations} sweeps "
                f"(J∙X = {self.residual_barycentre:.3e}, objective {self.objective:.6f})"
            )
            raise NotConvergedError(msg)


class _ColourClass:
    """Vertices with no edge between them, so their neighbour sums can be taken at once."""

    def __init__(self, graph: Graph, vertices: list[int]) -> None:
        self.vertices = vertices
        with_neighbours = [i for i, v in enumerate(vertices) if graph.adjacency[v]]
        self.rows = np.asarray(with_neighbours, dtype=np.int64)
        flat = [w for i in with_neighbours for w in graph.adjacency[vertices[i]]]
        self.flat = np.asarray(flat, dtype=np.int64)
        sizes = [len(graph.adjacency[vertices[i]]) for i in with_neighbours]
        self.starts = np.concatenate([[0], np.cumsum(sizes[:-1])]).astype(np.int64)

    def neighbour_sums(self, positions: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        sums = np.zeros((len(self.vertices), positions.shape[1]))
        if self.rows.size:
            sums[self.rows] = np.add.reduceat(positions[self.flat], self.starts, axis=0)
        return sums


def _colour_classes(graph: Graph) -> list[_ColourClass]:
    colouring = nx.greedy_color(graph.to_networkx(), strategy="largest_first")
    classes: dict[int, list[int]] = {}
    for v in range(graph.n):
        classes.setdefault(colouring[v], []).append(v)
    return [_ColourClass(graph, classes[c]) for c in sorted(classes)]


class _MixingRun:
    """One restart of the coordinate ascent, owning its factor.

    ``positions`` holds ``r(v)`` in row ``v``. Vertices are swept colour class
    by colour class; inside a class the neighbour sums do not depend on each
    other, so they are gathered in one step and only the barycentre term is
    updated vertex by vertex.
    """

    def __init__(self, graph: Graph, opts: SolverOptions, rng: np.random.Generator) -> None:
        self.graph = graph
        self.opts = opts
        self.classes = _colour_classes(graph)
        columns = rng.standard_normal((opts.rank_for(graph.n), graph.n))
        self.positions = np.ascontiguousarray((columns / np.linalg.norm(columns, axis=0)).T)
        self.total = self.positions.sum(axis=0)
        self.mu = np.zeros(self.positions.shape[1])
        self.sigma = opts.penalty_init
        self.iterations = 0
        self.trace: list[tuple[float, ...]] = []

    @property
    def factor(self) -> npt.NDArray[np.float64]:
        return self.positions.T

    def lagrangian(self) -> float:
        s = self.total
        rho = rho_edges(self.graph, RepresentationMatrix(self.factor))
        return rho - float(self.mu @ s) - self.sigma * float(s @ s)

    def sweep(self) -> float:
        """One pass over all vertices; returns the exact increase of L."""
        positions = self.positions
        s = self.total
        penalty = 2 * self.sigma
        gain = 0.0
        for colour_class in self.classes:
            linear = colour_class.neighbour_sums(positions) - self.mu
            for i, v in enumerate(colour_class.vertices):
                old = positions[v]
                rest = s - old
                direction = linear[i] - penalty * rest
                norm = math.sqrt(float(direction @ direction))
                if norm < ZERO_DIRECTION:
                    continue
                # L is linear in r(v) once r(v) is unit, so the step gains ‖g‖ - g·r_old.
                gain += norm - float(direction @ old)
                positions[v] = direction / norm
                s = rest + positions[v]
        self.total = s
        return gain

    def _inner_tolerance(self, round_index: int) -> float:
        """Loose in early rounds, where μ and σ are still far from final."""
        return max(self.opts.tol_obj, INITIAL_INNER_TOL * INNER_TOL_DECAY**round_index)

    def run(self) -> bool:
        opts = self.opts
        tol_j = opts.tol_feas * self.graph.n
        for round_index in range(opts.max_outer):
            self.total = self.positions.sum(axis=0)
            value = self.lagrangian()
            values = [value]
            inner_tol = self._inner_tolerance(round_index)
            stalled = False
            for _ in range(opts.max_inner):
                value += self.sweep()
                self.iterations += 1
                values.append(value)
                if len(values) > STALL_WINDOW:
                    progress = values[-1] - values[-1 - STALL_WINDOW]
                    if progress <= STALL_WINDOW * inner_tol * max(1.0, abs(value)):
                        stalled = True
                        break
            self.trace.append(tuple(values))

            s = self.positions.sum(axis=0)
            feasibility = float(s @ s)
            logger.debug(
                "Round %d: L=%.10g, J∙X=%.3e, sigma=%.3g, sweeps=%d",
                round_index,
                values[-1],
                feasibility,
                self.sigma,
                len(values) - 1,
            )
            if stalled and inner_tol <= opts.tol_obj and feasibility <= tol_j:
                return True
            self.mu += 2 * self.sigma * s
            if feasibility > tol_j:
                self.sigma = min(self.sigma * opts.penalty_growth, opts.penalty_max)
        return False


def solve_primal(graph: Graph, opts: SolverOptions | None = None) -> PrimalSolution:
    """Maximise ρ(G, r) over unit barycentre-0 representations.

    Runs ``opts.restarts`` independent ascents from seeds spawned off
    ``opts.seed`` and returns the best; converged runs beat non-converged ones,
    then higher objective, then lower barycentre residual. A non-converged
    result is still returned; call :meth:`PrimalSolution.ensure_converged` to
    turn it into an error.

    Raises:
        TrivialGraphError: The graph has fewer than 2 vertices.
    """
    opts = opts or SolverOptions()
    if graph.n < 2:
        msg = f"The program needs at least 2 vertices, got {graph.n}"
        raise TrivialGraphError(msg)

    children = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    candidates: list[PrimalSolution] = []
    for restart, child in enumerate(children):
        run = _MixingRun(graph, opts, np.random.default_rng(child))
        converged = run.run()
        factor = run.factor / np.linalg.norm(run.factor, axis=0)
        rep = RepresentationMatrix(factor)
        residuals = validate(graph, rep)
        candidates.append(
            PrimalSolution(
                rep=rep,
                objective=rho_edges(graph, rep),
                residual_unit=residuals.unit,
                residual_barycentre=residuals.barycentre,
                iterations=run.iterations,
                converged=converged,
                graph_fingerprint=graph.fingerprint,
                restart=restart,
                trace=tuple(run.trace),
            )
        )

    best = max(candidates, key=lambda c: (c.converged, c.objective, -c.residual_barycentre))
    logger.info(
        "Solved n=%d m=%d: objective %.8f (restart %d/%d, %d sweeps, converged=%s)",
        graph.n,
        graph.m,
        best.objective,
        best.restart + 1,
        opts.restarts,
        best.iterations,
        best.converged,
    )
    if not best.converged:
        logger.warning(
            "No restart converged (J∙X = %.3e); result is flagged", best.residual_barycentre
        )
    return best


# =============================================================================
# Dual side
# =============================================================================


@dataclass(frozen=True, eq=False)
class DualCertificate:
    """Dual multipliers and the smallest eigenvalue of ``M = -½A + diag(y) + y₀J``."""

    y: npt.NDArray[np.float64]
    y0: float
    dual_objective: float
    min_eig_m: float
    graph_fingerprint: str

    def is_valid(self, tol: float = CERTIFICATE_TOL) -> bool:
        return self.min_eig_m >= -tol

    def to_json(self) -> dict[str, Any]:
        return {
            "y": self.y.tolist(),
            "y0": self.y0,
            "dual_objective": self.dual_objective,
            "min_eig_m": self.min_eig_m,
        }


def evaluate_dual(graph: Graph, y: npt.ArrayLike, y0: float) -> DualCertificate:
    """Evaluate any dual point; valid iff ``M ⪰ 0``, which bounds every primal value."""
    multipliers = np.asarray(y, dtype=np.float64)
    if multipliers.shape != (graph.n,):
        msg = f"Need one multiplier per vertex ({graph.n}), got shape {multipliers.shape}"
        raise GraphMismatchError(msg)
    slack = -0.5 * graph.adjacency_matrix + np.diag(multipliers) + y0
    return DualCertificate(
        y=multipliers,
        y0=float(y0),
        dual_objective=float(multipliers.sum()),
        min_eig_m=sym_eigen(slack).min_eigenvalue,
        graph_fingerprint=graph.fingerprint,
    )


def _regular_spectrum(graph: Graph, *, connected: bool) -> SpectralData:
    if not graph.is_regular:
        msg = "Graph is not regular; the λ₂ bound and certificate need a regular graph"
        raise NotRegularError(msg)
    if graph.n < 2:
        msg = f"λ₂ needs at least 2 vertices, got {graph.n}"
        raise TrivialGraphError(msg)
    if not is_connected(graph):
        if connected:
            msg = "Graph is disconnected; the dual certificate needs a connected graph"
            raise NotConnectedError(msg)
        logger.warning("Graph is disconnected: λ₂ = λ₁ and the bound is d·n/2")
    return adjacency_spectrum(graph)


def _regular_dual(graph: Graph, shift: float) -> DualCertificate:
    spectral = _regular_spectrum(graph, connected=True)
    y = np.full(graph.n, spectral.lambda2 / 2 + shift)
    y0 = (spectral.lambda1 - spectral.lambda2) / (2 * graph.n)
    return evaluate_dual(graph, y, y0)


def dual_certificate_regular(graph: Graph) -> DualCertificate:
    """Tight certificate ``y_v = λ₂/2``; its objective is the λ₂·v(G)/2 bound.

    Raises:
        NotRegularError, NotConnectedError: Preconditions fail.
        CertificateInvalidError: ``M`` has an eigenvalue below ``-1e-8``.
    """
    certificate = _regular_dual(graph, 0.0)
    if not certificate.is_valid():
        msg = f"Tight dual certificate is not PSD: min eig(M) = {certificate.min_eig_m:.3e}"
        raise CertificateInvalidError(msg)
    return certificate


def strict_feasible_point(graph: Graph) -> DualCertificate:
    """Shifted point ``y_v = λ₂/2 + 1`` with every eigenvalue of ``M`` at least 1."""
    certificate = _regular_dual(graph, 1.0)
    if certificate.min_eig_m < 1 - CERTIFICATE_TOL:
        msg = f"Strict dual point has min eig(M) = {certificate.min_eig_m:.6f} < 1"
        raise CertificateInvalidError(msg)
    return certificate


def duality_gap(primal: PrimalSolution, dual: DualCertificate) -> float:
    """``dual_objective - objective``; negative beyond tolerance means a numerical fault."""
    if primal.graph_fingerprint != dual.graph_fingerprint:
        msg = "Primal solution and dual certificate belong to different graphs"
        raise GraphMismatchError(msg)
    gap = dual.dual_objective - primal.objective
    if gap < -WEAK_DUALITY_TOL:
        logger.warning("Weak duality violated: gap %.3e", gap)
    return gap


def upper_bound_regular(graph: Graph) -> float:
    """λ₂·v(G)/2, which bounds ρ(G) for every regular graph."""
    return _regular_spectrum(graph, connected=False).lambda2 * graph.n / 2


def eigenvector_residuals(
    graph: Graph, rep: RepresentationMatrix, value: float, tol: float = 1e-12
) -> npt.NDArray[np.float64]:
    """``‖A r_k - value·r_k‖ / ‖r_k‖`` for every row with ``‖r_k‖ > tol``."""
    norms = np.linalg.norm(rep.data, axis=1)
    rows = rep.data[norms > tol]
    defects = rows @ graph.adjacency_matrix - value * rows
    return np.linalg.norm(defects, axis=1) / norms[norms > tol]


def solution_report(
    solution: PrimalSolution, certificate: DualCertificate | None = None
) -> dict[str, Any]:
    """The solution block of the ``rho`` report; bound and gap only with a certificate."""
    upper = None if certificate is None else certificate.dual_objective
    gap = None if certificate is None else duality_gap(solution, certificate)
    return {
        "objective": solution.objective,
        "upper_bound": upper,
        "gap": gap,
        "residual_unit": solution.residual_unit,
        "residual_barycentre": solution.residual_barycentre,
        "rank": solution.rep.rank,
        "iterations": solution.iterations,
        "converged": solution.converged,
        "restart": solution.restart,
        "factor": solution.rep.to_json(),
    }
