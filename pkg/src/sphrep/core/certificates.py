"""Constructive lower bounds on ρ(G) for regular graphs of large girth.

For a d-regular graph and a radius ``k`` the Nilli vector of two far-apart
edges ``e`` and ``ē`` is ``+(d-1)^{-s/2}`` on the vertices at distance ``s``
from ``e`` and the negative of that around ``ē`` (``s <= k``). Pairing every
edge with a partner at distance at least ``2k+2`` (a perfect matching in the
"far apart" bipartite graph) and stacking the Nilli vectors, scaled by
``t = √(2d(k+1))``, gives a unit barycentre-0 representation whenever the girth
exceeds ``2k+2``.

Random regular graphs have a few short cycles. Edges near them are *bad*; only
pairs of good edges are kept, and the columns that lose norm are topped up with
repair rows ``(+g, -g)`` whose weights solve a degree-realisation problem on the
complete graph.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
import numpy.typing as npt

from sphrep.core.exceptions import (
    GirthTooSmallError,
    InvalidOptionsError,
    NoPairingError,
    NotRegularError,
    NotUnitError,
    StarViolatedError,
    TooCloseError,
)
from sphrep.core.graph import (
    DEFAULT_CYCLE_BUDGET,
    UNREACHABLE,
    Edge,
    Graph,
    bfs_distances,
    edge_dist,
    girth,
    iter_cycles,
)
from sphrep.core.matching import HopcroftKarp
from sphrep.core.representation import RepresentationMatrix, rho_edges, validate

__all__ = [
    "REPAIR_TOL",
    "EdgePairing",
    "GirthCertificate",
    "NilliIdentities",
    "NilliVector",
    "RandomRegularCertificate",
    "RepairWeights",
    "WeightProfile",
    "bad_edges",
    "ball_layers",
    "certificate_report",
    "edge_pairing",
    "girth_bound",
    "girth_representation",
    "nilli_identities",
    "nilli_vector",
    "radius_for_epsilon",
    "random_graph_bound",
    "random_regular_representation",
    "weight_repair",
]


logger = logging.getLogger(__name__)

UNIT_CHECK_TOL = 1e-9
REPAIR_TOL = 1e-12
"""Deficiencies and tightness slacks below this (relative to f(V)) count as zero."""


def _regular_degree(graph: Graph) -> int:
    d = graph.regular_degree
    if d is None:
        msg = "Nilli-vector constructions need a regular graph"
        raise NotRegularError(msg)
    return d


def _check_radius(k: int) -> None:
    if k < 0:
        msg = f"Radius k must be non-negative, got {k}"
        raise InvalidOptionsError(msg)


def _far_threshold(k: int) -> int:
    return 2 * k + 2


# =============================================================================
# Closed forms
# =============================================================================


def _deficit(d: int, k: int) -> float:
    root = 2 * math.sqrt(d - 1)
    return root - (root - 1) / (k + 1)


def girth_bound(n: int, d: int, k: int) -> float:
    """``(v(G)/2)(2√(d-1) - (2√(d-1)-1)/(k+1))``: ρ(G) for girth above ``2k+2``."""
    return n / 2 * _deficit(d, k)


def random_graph_bound(good_pairs: int, d: int, k: int) -> float:
    """``(|I|/d)(2√(d-1) - (2√(d-1)-1)/(k+1))``: what the good pairs contribute."""
    return good_pairs / d * _deficit(d, k)


def radius_for_epsilon(d: int, eps: float) -> int:
    """Smallest ``k >= 0`` with ``(2√(d-1)-1)/(k+1) <= ε/2``."""
    if eps <= 0:
        msg = f"epsilon must be positive, got {eps}"
        raise InvalidOptionsError(msg)
    excess = 2 * math.sqrt(d - 1) - 1
    k = max(0, math.ceil(2 * excess / eps) - 1)
    while k > 0 and excess / k <= eps / 2:
        k -= 1
    return k


# =============================================================================
# Nilli vectors
# =============================================================================


def ball_layers(graph: Graph, e: Edge, k: int) -> list[frozenset[int]]:
    """``V_0(e) .. V_k(e)``: the vertices at distance exactly ``s`` from ``e``.

    Layers beyond the component of ``e`` are empty.
    """
    graph.edge_index(e)
    _check_radius(k)
    layers = [frozenset(e)]
    seen = set(e)
    frontier: list[int] = list(e)
    for _ in range(k):
        following = sorted({w for u in frontier for w in graph.adjacency[u] if w not in seen})
        seen.update(following)
        layers.append(frozenset(following))
        frontier = following
    return layers


@dataclass(frozen=True)
class NilliVector:
    e: Edge
    ebar: Edge
    k: int
    d: int
    entries: dict[int, float] = field(repr=False)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.entries)

    def dense(self, n: int) -> npt.NDArray[np.float64]:
        vector = np.zeros(n)
        for v, value in self.entries.items():
            vector[v] = value
        return vector


def _layer_entries(layers: Sequence[frozenset[int]], d: int, sign: float) -> dict[int, float]:
    return {v: sign * (d - 1) ** (-s / 2) for s, layer in enumerate(layers) for v in layer}


def nilli_vector(graph: Graph, e: Edge, ebar: Edge, k: int) -> NilliVector:
    """The Nilli vector of ``e`` and ``ebar`` at radius ``k``.

    Edges in different components count as arbitrarily far apart.

    Raises:
        NotRegularError: The graph is not regular.
        TooCloseError: ``edge_dist(e, ebar) < 2k + 2``.
    """
    d = _regular_degree(graph)
    _check_radius(k)
    distance = edge_dist(graph, e, ebar)
    if distance is not None and distance < _far_threshold(k):
        msg = (
            f"Edges {e} and {ebar} are {distance} apart; "
            f"radius {k} needs at least {_far_threshold(k)}"
        )
        raise TooCloseError(msg)
    entries = _layer_entries(ball_layers(graph, e, k), d, 1.0)
    entries.update(_layer_entries(ball_layers(graph, ebar, k), d, -1.0))
    return NilliVector(e=e, ebar=ebar, k=k, d=d, entries=entries)


class NilliIdentities(NamedTuple):
    norm_sq: float
    quad: float
    tree_like: bool

    def expected(self, d: int, k: int) -> tuple[float, float]:
        """``(4(k+1), 4 + 8k√(d-1))``, the values a tree-like pair must hit."""
        return 4.0 * (k + 1), 4.0 + 8.0 * k * math.sqrt(d - 1)


def _is_forest(graph: Graph, vertices: frozenset[int]) -> bool:
    """Whether the subgraph induced on ``vertices`` has no cycle."""
    parent = {v: v for v in vertices}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u in vertices:
        for w in graph.adjacency[u]:
            if w <= u or w not in vertices:
                continue
            a, b = find(u), find(w)
            if a == b:
                return False
            parent[a] = b
    return True


def nilli_identities(graph: Graph, w: NilliVector) -> NilliIdentities:
    """Exact ``‖w‖²`` and ``w A wᵀ`` plus whether the supporting balls are trees."""
    x = w.dense(graph.n)
    quad = 0.0
    if graph.m:
        u, v = graph.edge_array.T
        quad = 2.0 * float(x[u] @ x[v])
    return NilliIdentities(
        norm_sq=float(x @ x), quad=quad, tree_like=_is_forest(graph, w.support)
    )


# =============================================================================
# Pairing
# =============================================================================


@dataclass(frozen=True)
class EdgePairing:
    """``pairs[i] = (e_i, ē_i)``; both coordinates run over every edge once."""

    k: int
    pairs: tuple[tuple[Edge, Edge], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def is_valid(self, graph: Graph) -> bool:
        first = sorted(e for e, _ in self.pairs)
        second = sorted(f for _, f in self.pairs)
        if first != list(graph.edges) or second != list(graph.edges):
            return False
        for e, f in self.pairs:
            distance = edge_dist(graph, e, f)
            if distance is not None and distance < _far_threshold(self.k):
                return False
        return True


class _FarOracle:
    """Indices of the edges at distance ``>= threshold`` from a given edge."""

    def __init__(self, graph: Graph, threshold: int) -> None:
        self._graph = graph
        self._threshold = threshold

    def __call__(self, index: int) -> list[int]:
        distances = bfs_distances(self._graph, self._graph.edges[index])
        ends = distances[self._graph.edge_array]
        ends = np.where(ends == UNREACHABLE, np.iinfo(np.int64).max, ends)
        return np.flatnonzero(ends.min(axis=1) >= self._threshold).tolist()


def edge_pairing(graph: Graph, k: int) -> EdgePairing:
    """Pair every edge with a partner at distance ``>= 2k+2`` via a perfect matching.

    Raises:
        NotRegularError: The graph is not regular.
        NoPairingError: The "far apart" bipartite graph has no perfect matching.
    """
    _regular_degree(graph)
    _check_radius(k)
    matcher = HopcroftKarp(graph.m, _FarOracle(graph, _far_threshold(k)))
    matched = matcher.run()
    if not matcher.is_perfect:
        msg = (
            f"No pairing of the {graph.m} edges at distance >= {_far_threshold(k)} exists "
            f"(maximum matching pairs {matched})"
        )
        raise NoPairingError(msg)
    pairs = tuple((graph.edges[i], graph.edges[j]) for i, j in enumerate(matcher.pair_left))
    logger.debug("Paired %d edges at radius %d in %d phases", graph.m, k, matcher.phases)
    return EdgePairing(k=k, pairs=pairs)


class _SideVectors:
    """Dense ``±(d-1)^{-s/2}`` layer vectors, one per edge, built on first use."""

    def __init__(self, graph: Graph, d: int, k: int) -> None:
        self._graph = graph
        self._d = d
        self._k = k
        self._cache: dict[Edge, npt.NDArray[np.float64]] = {}

    def __getitem__(self, e: Edge) -> npt.NDArray[np.float64]:
        if e not in self._cache:
            vector = np.zeros(self._graph.n)
            layers = ball_layers(self._graph, e, self._k)
            for v, value in _layer_entries(layers, self._d, 1.0).items():
                vector[v] = value
            self._cache[e] = vector
        return self._cache[e]

    def rows(self, pairs: Sequence[tuple[Edge, Edge]]) -> npt.NDArray[np.float64]:
        if not pairs:
            return np.zeros((0, self._graph.n))
        return np.vstack([self[e] - self[f] for e, f in pairs])


def _scale(d: int, k: int) -> float:
    return math.sqrt(2 * d * (k + 1))


# =============================================================================
# Girth certificate
# =============================================================================


@dataclass(frozen=True, eq=False)
class GirthCertificate:
    """Stacked Nilli vectors of a full pairing, scaled to unit columns."""

    rep: RepresentationMatrix
    rho: float
    pairing: EdgePairing
    d: int
    k: int
    closed_form: float

    @property
    def t(self) -> float:
        return _scale(self.d, self.k)


def girth_representation(graph: Graph, k: int) -> GirthCertificate:
    """Unit barycentre-0 representation with ``ρ = girth_bound(n, d, k)``.

    Raises:
        NotRegularError: The graph is not regular.
        GirthTooSmallError: ``girth(G) <= 2k+2``.
        NoPairingError: No far-apart pairing exists.
        NotUnitError: A column missed unit norm (the neighbourhoods were not trees).
    """
    d = _regular_degree(graph)
    _check_radius(k)
    g = girth(graph)
    if g <= _far_threshold(k):
        msg = f"Girth {g} is not above 2k+2 = {_far_threshold(k)}"
        raise GirthTooSmallError(msg)
    pairing = edge_pairing(graph, k)
    rep = RepresentationMatrix(_SideVectors(graph, d, k).rows(pairing.pairs) / _scale(d, k))
    residuals = validate(graph, rep)
    if residuals.unit > UNIT_CHECK_TOL:
        msg = f"Girth certificate columns are not unit (residual {residuals.unit:.3e})"
        raise NotUnitError(msg)
    return GirthCertificate(
        rep=rep,
        rho=rho_edges(graph, rep),
        pairing=pairing,
        d=d,
        k=k,
        closed_form=girth_bound(graph.n, d, k),
    )


# =============================================================================
# Bad edges and weight repair
# =============================================================================


def bad_edges(graph: Graph, k: int, budget: int = DEFAULT_CYCLE_BUDGET) -> frozenset[Edge]:
    """Edges within distance ``k`` of some cycle of length at most ``2k+2``.

    Raises:
        BudgetExceededError: The short-cycle enumeration ran out of budget.
    """
    _check_radius(k)
    length = _far_threshold(k)
    if length < 3:
        return frozenset()
    on_cycles = sorted({v for cycle in iter_cycles(graph, length, budget) for v in cycle})
    if not on_cycles:
        return frozenset()
    distances = bfs_distances(graph, on_cycles)
    near = (distances != UNREACHABLE) & (distances <= k)
    return frozenset((u, v) for u, v in graph.edges if near[u] or near[v])


@dataclass(frozen=True)
class WeightProfile:
    """Non-negative vertex weights with ``f(v) <= ½ f(V)`` for every vertex.

    Raises:
        InvalidOptionsError: A weight is negative or not finite.
        StarViolatedError: Some vertex carries more than half the total.
    """

    f: tuple[float, ...]

    def __post_init__(self) -> None:
        values = np.asarray(self.f, dtype=np.float64)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            msg = "Weight profile entries must be finite and non-negative"
            raise InvalidOptionsError(msg)
        half = values.sum() / 2
        if values.size:
            v = int(np.argmax(values))
            if values[v] > half + REPAIR_TOL * max(1.0, half):
                msg = f"Vertex {v} carries f = {values[v]:.6g} > f(V)/2 = {half:.6g}"
                raise StarViolatedError(msg)

    @property
    def total(self) -> float:
        return float(sum(self.f))


@dataclass(frozen=True)
class RepairWeights:
    """Weights ``g(uv) > 0`` on pairs ``u < v`` of the complete graph; absent pairs are 0."""

    n: int
    weights: dict[Edge, float]
    steps: int

    def weight(self, u: int, v: int) -> float:
        return self.weights.get((min(u, v), max(u, v)), 0.0)

    def vertex_sums(self) -> npt.NDArray[np.float64]:
        """``Σ_u g(uv)²`` per vertex."""
        sums = np.zeros(self.n)
        for (u, v), g in self.weights.items():
            sums[u] += g * g
            sums[v] += g * g
        return sums


def weight_repair(profile: WeightProfile) -> RepairWeights:
    """Realise ``f`` as vertex sums of squared weights on the complete graph.

    Works on ``h = g²``. When a vertex holds exactly half of the remaining total
    it takes a star to every other vertex and the profile is used up. Otherwise
    the smallest positive vertex ``x`` and the largest other vertex ``y`` share
    an edge carrying ``min(f(x), ½f(V) - f(z))``, where ``z`` is the largest
    remaining vertex: either ``x`` drops to zero or ``z`` becomes tight. Every
    step empties a vertex or ends the run, so there are at most ``n`` steps.
    """
    f = np.asarray(profile.f, dtype=np.float64).copy()
    n = f.size
    squared: dict[Edge, float] = {}

    def add(u: int, v: int, amount: float) -> None:
        key = (min(u, v), max(u, v))
        squared[key] = squared.get(key, 0.0) + amount

    steps = 0
    scale = max(1.0, profile.total)
    while True:
        total = float(f.sum())
        if total <= REPAIR_TOL * scale:
            break
        steps += 1
        order = np.argsort(-f, kind="stable")
        top = int(order[0])
        if f[top] >= total / 2 - REPAIR_TOL * scale:
            for u in range(n):
                if u != top and f[u] > 0:
                    add(top, u, float(f[u]))
            break
        positive = np.flatnonzero(f > 0)
        x = int(positive[np.argmin(f[positive])])
        y = top if top != x else int(order[1])
        others = [int(w) for w in order if w not in {x, y}]
        room = total / 2 - float(f[others[0]]) if others else float(f[x])
        amount = min(float(f[x]), room)
        add(x, y, amount)
        f[x] -= amount
        f[y] -= amount
        if f[x] <= REPAIR_TOL * scale:
            f[x] = 0.0
        f[y] = max(float(f[y]), 0.0)

    weights = {key: math.sqrt(h) for key, h in sorted(squared.items()) if h > 0}
    return RepairWeights(n=n, weights=weights, steps=steps)


# =============================================================================
# Random regular certificate
# =============================================================================


@dataclass(frozen=True, eq=False)
class RandomRegularCertificate:
    """Good-pair Nilli rows plus repair rows.

    ``partial_rho`` is ρ of the good-pair rows alone and equals ``bound``.
    Repair rows change ρ only when a repaired pair is an edge of the graph
    (``repair_touches_edges``); ``bound_holds`` compares ``rho`` with ``bound``
    only when they do not.
    """

    rep: RepresentationMatrix
    rho: float
    partial_rho: float
    pairing: EdgePairing
    bad: frozenset[Edge]
    good_pairs: int
    deficiency: npt.NDArray[np.float64] = field(repr=False)
    repair_rows: int
    repair_touches_edges: bool
    d: int
    k: int

    @property
    def bound(self) -> float:
        return random_graph_bound(self.good_pairs, self.d, self.k)

    @property
    def bound_holds(self) -> bool | None:
        if self.repair_touches_edges:
            return None
        return self.rho >= self.bound - UNIT_CHECK_TOL * max(1.0, abs(self.bound))


def random_regular_representation(
    graph: Graph, k: int, budget: int = DEFAULT_CYCLE_BUDGET
) -> RandomRegularCertificate:
    """Certificate for regular graphs that may have short cycles.

    The full pairing is computed first; pairs touching a bad edge are then
    dropped without re-matching.

    Raises:
        NotRegularError: The graph is not regular.
        NoPairingError: No far-apart pairing of all edges exists.
        StarViolatedError: The column deficiencies cannot be repaired.
        NotUnitError: A column still missed unit norm after repair.
    """
    d = _regular_degree(graph)
    _check_radius(k)
    pairing = edge_pairing(graph, k)
    bad = bad_edges(graph, k, budget)
    good = [(e, f) for e, f in pairing.pairs if e not in bad and f not in bad]
    nilli_rows = _SideVectors(graph, d, k).rows(good) / _scale(d, k)
    partial = RepresentationMatrix(nilli_rows)

    deficiency = 1.0 - np.sum(nilli_rows * nilli_rows, axis=0)
    deficiency[deficiency <= REPAIR_TOL] = 0.0
    repair = weight_repair(WeightProfile(tuple(deficiency.tolist())))
    repair_rows = np.zeros((len(repair.weights), graph.n))
    for row, ((u, v), g) in enumerate(repair.weights.items()):
        repair_rows[row, u] = g
        repair_rows[row, v] = -g
    rep = RepresentationMatrix(np.vstack([nilli_rows, repair_rows]))

    residuals = validate(graph, rep)
    if residuals.unit > UNIT_CHECK_TOL:
        msg = f"Repaired representation is not unit (residual {residuals.unit:.3e})"
        raise NotUnitError(msg)
    touches = any(graph.has_edge(u, v) for u, v in repair.weights)
    logger.debug(
        "Random-regular certificate: %d/%d good pairs, %d bad edges, %d repair rows",
        len(good),
        len(pairing),
        len(bad),
        len(repair.weights),
    )
    return RandomRegularCertificate(
        rep=rep,
        rho=rho_edges(graph, rep),
        partial_rho=rho_edges(graph, partial),
        pairing=pairing,
        bad=bad,
        good_pairs=len(good),
        deficiency=deficiency,
        repair_rows=len(repair.weights),
        repair_touches_edges=touches,
        d=d,
        k=k,
    )


def certificate_report(
    graph: Graph,
    certificate: GirthCertificate | RandomRegularCertificate,
    upper_bound: float | None,
) -> dict[str, Any]:
    """The certificate block shared by the ``bound`` and ``nilli`` reports."""
    if isinstance(certificate, GirthCertificate):
        good, bad, closed_form = len(certificate.pairing), 0, certificate.closed_form
        extra: dict[str, Any] = {}
    else:
        good, bad = certificate.good_pairs, len(certificate.bad)
        closed_form = girth_bound(graph.n, certificate.d, certificate.k) if bad == 0 else None
        extra = {
            "partial_rho": certificate.partial_rho,
            "good_pair_bound": certificate.bound,
            "repair_rows": certificate.repair_rows,
            "repair_touches_edges": certificate.repair_touches_edges,
        }
    return {
        "k": certificate.k,
        "paired": len(certificate.pairing),
        "good_pairs": good,
        "bad_edges": bad,
        "rho_certificate": certificate.rho,
        "theorem5_bound": closed_form,
        "upper_bound": upper_bound,
        **extra,
    }
