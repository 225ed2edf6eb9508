"""Graph data model and the metric/cycle queries the certificates rely on.

Graphs are simple, undirected and immutable. Vertex ids are ``0..n-1``; edges
are stored once as ``(u, v)`` with ``u < v`` in sorted order, so two graphs
built from the same edge set compare (and fingerprint) equal regardless of the
input order.

Disconnected graphs are allowed here. Operations that need connectivity live
downstream and check ``is_connected`` themselves.
"""

import hashlib
import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np
import numpy.typing as npt

from sphrep.core.exceptions import (
    BudgetExceededError,
    DegreeParityError,
    EdgeNotInGraphError,
    InvalidOptionsError,
    OutOfRangeError,
    RejectionLimitError,
    SelfLoopError,
    UnknownGraphError,
)

__all__ = [
    "DEFAULT_CYCLE_BUDGET",
    "DEFAULT_MAX_RESTARTS",
    "UNREACHABLE",
    "CycleCensus",
    "Edge",
    "Graph",
    "bfs_distances",
    "build_graph",
    "count_cycles_upto",
    "dist",
    "disjoint_union",
    "edge_dist",
    "expected_cycle_count",
    "girth",
    "is_connected",
    "iter_cycles",
    "random_regular",
]


logger = logging.getLogger(__name__)

type Edge = tuple[int, int]

UNREACHABLE = -1
"""Marker used in distance arrays for vertices in another component."""

DEFAULT_CYCLE_BUDGET = 20_000_000
DEFAULT_MAX_RESTARTS = 10_000


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Build instances with :func:`build_graph`; the constructor trusts its input.
    """

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        """Number of edges, e(G)."""
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> npt.NDArray[np.int64]:
        return np.array([len(nbrs) for nbrs in self.adjacency], dtype=np.int64)

    @property
    def is_regular(self) -> bool:
        return self.n == 0 or bool(np.all(self.degrees == self.degrees[0]))

    @property
    def regular_degree(self) -> int | None:
        """The common degree d, or None when degrees differ."""
        if not self.is_regular:
            return None
        return int(self.degrees[0]) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        return _canonical(u, v) in self._edge_index

    def edge_index(self, edge: Edge) -> int:
        """Position of ``edge`` in ``self.edges``; raises if it is not an edge."""
        key = _canonical(*edge)
        try:
            return self._edge_index[key]
        except KeyError:
            msg = f"{edge} is not an edge of the graph"
            raise EdgeNotInGraphError(msg) from None

    @cached_property
    def _edge_index(self) -> dict[Edge, int]:
        return {edge: i for i, edge in enumerate(self.edges)}

    @cached_property
    def edge_array(self) -> npt.NDArray[np.int64]:
        """Edges as an ``(m, 2)`` integer array."""
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def adjacency_matrix(self) -> npt.NDArray[np.float64]:
        a = np.zeros((self.n, self.n))
        if self.m:
            u, v = self.edge_array.T
            a[u, v] = 1.0
            a[v, u] = 1.0
        a.flags.writeable = False
        return a

    def to_networkx(self) -> nx.Graph:
        """A fresh networkx copy with every vertex present, isolated ones included."""
        view = nx.Graph()
        view.add_nodes_from(range(self.n))
        view.add_edges_from(self.edges)
        return view

    @cached_property
    def fingerprint(self) -> str:
        """SHA-256 of the canonical edge list."""
        digest = hashlib.sha256(f"{self.n} {self.m}\n".encode())
        for u, v in self.edges:
            digest.update(f"{u} {v}\n".encode())
        return digest.hexdigest()


def _canonical(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def build_graph(n: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph, collapsing duplicate and reversed edges.

    Raises:
        OutOfRangeError: A vertex id is negative or ``>= n``.
        SelfLoopError: An edge has equal endpoints.
    """
    if n < 0:
        msg = f"Vertex count must be non-negative, got {n}"
        raise OutOfRangeError(msg)
    edges: set[Edge] = set()
    for raw_u, raw_v in edge_list:
        u, v = int(raw_u), int(raw_v)
        for x in (u, v):
            if not 0 <= x < n:
                msg = f"Vertex {x} out of range for n={n}"
                raise OutOfRangeError(msg)
        if u == v:
            msg = f"Self-loop at vertex {u}"
            raise SelfLoopError(msg)
        edges.add(_canonical(u, v))

    ordered = tuple(sorted(edges))
    neighbours: list[list[int]] = [[] for _ in range(n)]
    for u, v in ordered:
        neighbours[u].append(v)
        neighbours[v].append(u)
    adjacency = tuple(tuple(sorted(nbrs)) for nbrs in neighbours)
    return Graph(n=n, edges=ordered, adjacency=adjacency)


def disjoint_union(first: Graph, second: Graph) -> Graph:
    """Place ``second`` after ``first``, shifting its vertex ids by ``first.n``."""
    shifted = [(u + first.n, v + first.n) for u, v in second.edges]
    return build_graph(first.n + second.n, [*first.edges, *shifted])


# =============================================================================
# Distances
# =============================================================================


def _check_vertex(graph: Graph, v: int) -> None:
    if not 0 <= v < graph.n:
        msg = f"Vertex {v} out of range for n={graph.n}"
        raise OutOfRangeError(msg)


def bfs_distances(graph: Graph, sources: Iterable[int]) -> npt.NDArray[np.int64]:
    """Multi-source BFS; unreachable vertices get ``UNREACHABLE``."""
    distances = np.full(graph.n, UNREACHABLE, dtype=np.int64)
    queue: deque[int] = deque()
    for s in sources:
        _check_vertex(graph, s)
        if distances[s] == UNREACHABLE:
            distances[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        step = distances[u] + 1
        for w in graph.adjacency[u]:
            if distances[w] == UNREACHABLE:
                distances[w] = step
                queue.append(w)
    return distances


def is_connected(graph: Graph) -> bool:
    if graph.n <= 1:
        return True
    return bool(np.all(bfs_distances(graph, [0]) != UNREACHABLE))


def dist(graph: Graph, u: int, v: int) -> int | None:
    """Shortest-path length between two vertices; None when unreachable."""
    _check_vertex(graph, v)
    d = int(bfs_distances(graph, [u])[v])
    return None if d == UNREACHABLE else d


def edge_dist(graph: Graph, e: Edge, f: Edge) -> int | None:
    """Minimum vertex distance between the endpoints of two edges."""
    graph.edge_index(e)
    graph.edge_index(f)
    distances = bfs_distances(graph, e)
    reachable = [int(distances[x]) for x in f if distances[x] != UNREACHABLE]
    return min(reachable) if reachable else None


# =============================================================================
# Cycles
# =============================================================================


def girth(graph: Graph) -> int | float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    return nx.girth(graph.to_networkx())


@dataclass(frozen=True)
class CycleCensus:
    """Number of distinct cycles of each length ``3..max_length``.

    Lengths with no cycles are absent from ``counts``.
    """

    max_length: int
    counts: dict[int, int]

    def count(self, length: int) -> int:
        return self.counts.get(length, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def shortest(self) -> int | None:
        return min(self.counts) if self.counts else None


def _canonical_cycle(cycle: list[int]) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    rotated = cycle[i:] + cycle[:i]
    if rotated[1] > rotated[-1]:
        rotated = [rotated[0], *reversed(rotated[1:])]
    return tuple(rotated)


def iter_cycles(
    graph: Graph, max_length: int, budget: int = DEFAULT_CYCLE_BUDGET
) -> Iterator[tuple[int, ...]]:
    """Yield every cycle of length ``3..max_length`` exactly once.

    A cycle is reported as a vertex tuple starting at its smallest vertex and
    oriented so that the second vertex is smaller than the last one.

    Raises:
        InvalidOptionsError: ``max_length < 3``.
        BudgetExceededError: The graph has more than ``budget`` such cycles.
    """
    if max_length < 3:
        msg = f"Cycle length bound must be at least 3, got {max_length}"
        raise InvalidOptionsError(msg)
    cycles = nx.simple_cycles(graph.to_networkx(), length_bound=max_length)
    for found, cycle in enumerate(cycles):
        if found >= budget:
            msg = (
                f"Cycle enumeration exceeded its budget of {budget} cycles "
                f"(max_length={max_length}); the graph is too dense for an exact census"
            )
            raise BudgetExceededError(msg)
        yield _canonical_cycle(cycle)


def count_cycles_upto(
    graph: Graph, max_length: int, budget: int = DEFAULT_CYCLE_BUDGET
) -> CycleCensus:
    """Exact census of distinct cycles by length, up to ``max_length``."""
    counts: dict[int, int] = {}
    for cycle in iter_cycles(graph, max_length, budget):
        counts[len(cycle)] = counts.get(len(cycle), 0) + 1
    return CycleCensus(max_length=max_length, counts=dict(sorted(counts.items())))


def expected_cycle_count(d: int, length: int) -> float:
    """Asymptotic mean number of ``length``-cycles in a random d-regular graph."""
    return (d - 1) ** length / (2 * length)


# =============================================================================
# Random regular graphs
# =============================================================================


def random_regular(
    n: int, d: int, seed: int, max_restarts: int = DEFAULT_MAX_RESTARTS
) -> Graph:
    """Sample a d-regular simple graph from the pairing model.

    ``n * d`` half-edges are shuffled and paired consecutively. Any loop or
    repeated pair rejects the whole pairing and the sampler starts over, which
    keeps the result uniform over simple graphs.

    Raises:
        DegreeParityError: ``n * d`` is odd.
        RejectionLimitError: ``max_restarts`` pairings were all rejected.
    """
    if (n * d) % 2:
        msg = f"n * d must be even, got n={n}, d={d}"
        raise DegreeParityError(msg)
    if not 0 <= d < n:
        msg = f"Degree must satisfy 0 <= d < n, got n={n}, d={d}"
        raise UnknownGraphError(msg)
    if d == 0:
        return build_graph(n, [])

    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for attempt in range(max_restarts):
        pairs = np.sort(rng.permutation(stubs).reshape(-1, 2), axis=1)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        if len(np.unique(pairs, axis=0)) != len(pairs):
            continue
        logger.debug("Pairing model accepted after %d restarts (n=%d, d=%d)", attempt, n, d)
        return build_graph(n, pairs.tolist())

    msg = (
        f"Pairing model rejected {max_restarts} pairings for n={n}, d={d}; "
        "loops and multi-edges become likely as d grows"
    )
    raise RejectionLimitError(msg)
