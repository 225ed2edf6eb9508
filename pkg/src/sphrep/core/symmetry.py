"""Automorphism groups and the orbit construction for vertex-transitive graphs.

For a connected regular graph with a transitive automorphism group Γ, stacking
the permuted copies ``r₀∘σ`` (σ ∈ Γ) of one λ₂-eigenvector ``r₀`` gives a
representation whose columns all have the same norm. Rescaled to unit columns
it is barycentre-0 and reaches ``ρ = λ₂·v(G)/2``, the upper bound.

Permutations are tuples ``p`` with ``p[v]`` the image of vertex ``v``.
"""

import logging
from collections import deque
from collections.abc import Iterable

import numpy as np

from sphrep.core.exceptions import InvalidOptionsError, NotConnectedError, NotRegularError
from sphrep.core.graph import Graph, is_connected
from sphrep.core.linalg import EigenMethod, psd_factor
from sphrep.core.representation import RepresentationMatrix, adjacency_spectrum

__all__ = [
    "DEFAULT_GROUP_LIMIT",
    "Permutation",
    "close_group",
    "cyclic_group",
    "dihedral_group",
    "edge_orbits",
    "hypercube_translations",
    "is_automorphism",
    "is_transitive",
    "orbit_representation",
]


logger = logging.getLogger(__name__)

type Permutation = tuple[int, ...]

DEFAULT_GROUP_LIMIT = 100_000


def cyclic_group(n: int) -> list[Permutation]:
    """Rotations ``v -> v + s (mod n)`` of the cycle labelling."""
    return [tuple((v + s) % n for v in range(n)) for s in range(n)]


def dihedral_group(n: int) -> list[Permutation]:
    reflections = [tuple((s - v) % n for v in range(n)) for s in range(n)]
    return [*cyclic_group(n), *reflections]


def hypercube_translations(k: int) -> list[Permutation]:
    """Translations ``x -> x XOR t`` of the binary labels of Q_k."""
    n = 1 << k
    return [tuple(x ^ t for x in range(n)) for t in range(n)]


def _compose(p: Permutation, q: Permutation) -> Permutation:
    """``p∘q``: apply ``q`` first."""
    return tuple(p[x] for x in q)


def close_group(
    generators: Iterable[Permutation], limit: int = DEFAULT_GROUP_LIMIT
) -> list[Permutation]:
    """The group generated by ``generators``, identity first, in discovery order.

    Raises:
        InvalidOptionsError: Generators of different lengths, a non-bijection,
            or a group larger than ``limit``.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        msg = "At least one generator is needed"
        raise InvalidOptionsError(msg)
    n = len(gens[0])
    for g in gens:
        if len(g) != n or sorted(g) != list(range(n)):
            msg = f"Not a permutation of 0..{n - 1}: {g}"
            raise InvalidOptionsError(msg)

    identity = tuple(range(n))
    seen = {identity}
    order = [identity]
    queue: deque[Permutation] = deque([identity])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = _compose(g, p)
            if q in seen:
                continue
            if len(seen) >= limit:
                msg = f"Generated group exceeds {limit} elements"
                raise InvalidOptionsError(msg)
            seen.add(q)
            order.append(q)
            queue.append(q)
    return order


def is_automorphism(graph: Graph, perm: Permutation) -> bool:
    if len(perm) != graph.n or sorted(perm) != list(range(graph.n)):
        return False
    return all(graph.has_edge(perm[u], perm[v]) for u, v in graph.edges)


def is_transitive(n: int, group: Iterable[Permutation]) -> bool:
    """Whether the orbit of vertex 0 is every vertex."""
    return n == 0 or len({p[0] for p in group}) == n


def edge_orbits(graph: Graph, group: Iterable[Permutation]) -> list[list[int]]:
    """Partition of the edge indices into orbits, each sorted, ordered by first index."""
    parent = list(range(graph.m))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in group:
        for i, (u, v) in enumerate(graph.edges):
            a, b = find(i), find(graph.edge_index((perm[u], perm[v])))
            if a != b:
                parent[max(a, b)] = min(a, b)

    orbits: dict[int, list[int]] = {}
    for i in range(graph.m):
        orbits.setdefault(find(i), []).append(i)
    return list(orbits.values())


def orbit_representation(
    graph: Graph,
    group: Iterable[Permutation],
    *,
    compress: bool = True,
    method: EigenMethod = "lapack",
) -> RepresentationMatrix:
    """Symmetrise a λ₂-eigenvector over a transitive automorphism group.

    With ``compress`` the stacked rows (one per group element) are reduced to
    ``rank(RᵀR)`` rows by factoring the Gram matrix; positions are unchanged up
    to an orthogonal map.

    Raises:
        NotRegularError: The graph is not regular.
        NotConnectedError: The graph is disconnected.
        InvalidOptionsError: The group is not transitive or holds a
            non-automorphism.
    """
    if not graph.is_regular:
        msg = "The orbit construction needs a regular graph"
        raise NotRegularError(msg)
    if graph.n < 2 or not is_connected(graph):
        msg = "The orbit construction needs a connected graph on at least 2 vertices"
        raise NotConnectedError(msg)
    perms = list(group)
    for perm in perms:
        if not is_automorphism(graph, perm):
            msg = f"Not an automorphism of the graph: {perm}"
            raise InvalidOptionsError(msg)
    if not is_transitive(graph.n, perms):
        msg = "The group does not act transitively on the vertices"
        raise InvalidOptionsError(msg)

    r0 = adjacency_spectrum(graph, method).eigenvectors[:, 1]
    stacked = np.vstack([r0[list(perm)] for perm in perms])
    stacked *= np.sqrt(graph.n / len(perms))
    logger.debug("Orbit representation: %d group elements, n=%d", len(perms), graph.n)
    if not compress:
        return RepresentationMatrix(stacked)
    factor = psd_factor(stacked.T @ stacked)
    return RepresentationMatrix(factor / np.linalg.norm(factor, axis=0))
