"""Graph generators and the generator registry.

Generators are addressed from the CLI with ``name[:params]`` notation:

- ``petersen`` - no parameters
- ``cycle:20`` - one integer
- ``random:200,3`` - comma-separated integers (``random:n,d[,seed]``)
- ``platonic:icosahedron`` - a solid name
"""

import itertools
import logging
from collections.abc import Callable
from dataclasses import dataclass

import networkx as nx

from sphrep.core.exceptions import UnknownGraphError
from sphrep.core.graph import Graph, build_graph, random_regular

__all__ = [
    "GENERATORS",
    "PLATONIC_SOLIDS",
    "GeneratorEntry",
    "complete",
    "complete_bipartite",
    "cycle",
    "get_graph",
    "hypercube",
    "list_generators",
    "path",
    "petersen",
    "platonic",
]


logger = logging.getLogger(__name__)


def cycle(n: int) -> Graph:
    """Cycle C_n with edges ``i ~ i+1 (mod n)``."""
    if n < 3:
        msg = f"cycle needs n >= 3, got {n}"
        raise UnknownGraphError(msg)
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    """Path P_n on ``n`` vertices."""
    if n < 1:
        msg = f"path needs n >= 1, got {n}"
        raise UnknownGraphError(msg)
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        msg = f"complete needs n >= 1, got {n}"
        raise UnknownGraphError(msg)
    return build_graph(n, itertools.combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with parts ``0..a-1`` and ``a..a+b-1``."""
    if a < 1 or b < 1:
        msg = f"complete_bipartite needs a, b >= 1, got {a}, {b}"
        raise UnknownGraphError(msg)
    return build_graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def hypercube(k: int) -> Graph:
    """Q_k; vertex ``x`` is the binary label, adjacent to labels one bit away."""
    if k < 1:
        msg = f"hypercube needs k >= 1, got {k}"
        raise UnknownGraphError(msg)
    n = 1 << k
    return build_graph(n, [(x, x ^ (1 << bit)) for x in range(n) for bit in range(k)])


def petersen() -> Graph:
    """Petersen graph: outer 5-cycle ``0..4``, spokes ``i ~ i+5``, inner pentagram."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, [*outer, *spokes, *inner])


PLATONIC_SOLIDS: dict[str, Callable[[], nx.Graph]] = {
    "tetrahedron": nx.tetrahedral_graph,
    "cube": nx.cubical_graph,
    "octahedron": nx.octahedral_graph,
    "dodecahedron": nx.dodecahedral_graph,
    "icosahedron": nx.icosahedral_graph,
}


def platonic(name: str) -> Graph:
    """1-skeleton of a Platonic solid, in networkx's vertex order."""
    try:
        factory = PLATONIC_SOLIDS[name]
    except KeyError:
        available = ", ".join(sorted(PLATONIC_SOLIDS))
        msg = f"Unknown Platonic solid: '{name}'. Available: {available}"
        raise UnknownGraphError(msg) from None
    skeleton = nx.convert_node_labels_to_integers(factory(), ordering="sorted")
    return build_graph(skeleton.number_of_nodes(), skeleton.edges())


def _random(n: int, d: int, seed: int = 0) -> Graph:
    return random_regular(n, d, seed)


# =============================================================================
# Registry
# =============================================================================


@dataclass(frozen=True)
class GeneratorEntry:
    """A named generator and how to read its ``:params`` suffix."""

    factory: Callable[..., Graph]
    description: str
    params: str = ""
    text_param: bool = False


# Explicit registry of all generators
GENERATORS: dict[str, GeneratorEntry] = {
    "cycle": GeneratorEntry(cycle, "Cycle C_n", "n"),
    "path": GeneratorEntry(path, "Path on n vertices", "n"),
    "complete": GeneratorEntry(complete, "Complete graph K_n", "n"),
    "bipartite": GeneratorEntry(complete_bipartite, "Complete bipartite K_{a,b}", "a,b"),
    "hypercube": GeneratorEntry(hypercube, "Hypercube Q_k", "k"),
    "petersen": GeneratorEntry(petersen, "Petersen graph"),
    "platonic": GeneratorEntry(platonic, "Platonic solid skeleton", "name", text_param=True),
    "random": GeneratorEntry(_random, "Random d-regular graph (pairing model)", "n,d[,seed]"),
}


def get_graph(spec: str) -> Graph:
    """Build a graph from ``name[:params]`` notation.

    Also accepts the solid names directly (``icosahedron`` for
    ``platonic:icosahedron``).
    """
    if ":" in spec:
        name, raw = spec.split(":", 1)
    else:
        name, raw = spec, None

    if name in PLATONIC_SOLIDS and raw is None:
        return platonic(name)
    if name not in GENERATORS:
        available = ", ".join(sorted(GENERATORS))
        msg = f"Unknown generator: '{name}'. Available generators: {available}"
        raise UnknownGraphError(msg)

    entry = GENERATORS[name]
    if raw is None:
        args: list[int | str] = []
    elif entry.text_param:
        args = [raw]
    else:
        try:
            args = [int(part) for part in raw.split(",")]
        except ValueError:
            msg = f"Generator '{name}' expects integer parameters ({entry.params}), got '{raw}'"
            raise UnknownGraphError(msg) from None
    try:
        graph = entry.factory(*args)
    except TypeError:
        usage = f"{name}:{entry.params}" if entry.params else name
        msg = f"Wrong parameters for generator '{name}'. Usage: {usage}"
        raise UnknownGraphError(msg) from None
    logger.debug("Generated %s: n=%d, m=%d", spec, graph.n, graph.m)
    return graph


def list_generators() -> list[tuple[str, str]]:
    """List generator usages with their descriptions."""
    return [
        (f"{name}:{entry.params}" if entry.params else name, entry.description)
        for name, entry in sorted(GENERATORS.items())
    ]
