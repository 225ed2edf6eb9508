"""Hopcroft-Karp maximum bipartite matching over a lazy neighbour oracle.

Left and right vertices are both ``0..size-1``. The bipartite graph is never
stored: ``neighbours(left)`` is asked for the right-neighbours of a left
vertex at most once and the answer is memoised. Augmenting paths are searched
iteratively, so long paths do not hit the recursion limit.
"""

import logging
from collections import deque
from collections.abc import Callable, Sequence

__all__ = ["UNMATCHED", "HopcroftKarp"]


logger = logging.getLogger(__name__)

UNMATCHED = -1
_INFINITY = -1


class HopcroftKarp:
    """Maximum matching between two vertex sets of equal size.

    Neighbour lists are scanned in the order the oracle returns them and left
    vertices in increasing order, so results are deterministic.
    """

    def __init__(self, size: int, neighbours: Callable[[int], Sequence[int]]) -> None:
        self._size = size
        self._oracle = neighbours
        self._cache: dict[int, Sequence[int]] = {}
        self.pair_left = [UNMATCHED] * size
        self.pair_right = [UNMATCHED] * size
        self._dist = [_INFINITY] * size
        self._limit = _INFINITY
        self.phases = 0

    def _adjacent(self, left: int) -> Sequence[int]:
        if left not in self._cache:
            self._cache[left] = self._oracle(left)
        return self._cache[left]

    def _layer(self) -> bool:
        """BFS from free left vertices; True when some free right vertex is reachable."""
        queue: deque[int] = deque()
        for left in range(self._size):
            if self.pair_left[left] == UNMATCHED:
                self._dist[left] = 0
                queue.append(left)
            else:
                self._dist[left] = _INFINITY
        self._limit = _INFINITY
        while queue:
            left = queue.popleft()
            if self._limit != _INFINITY and self._dist[left] >= self._limit:
                continue
            for right in self._adjacent(left):
                mate = self.pair_right[right]
                if mate == UNMATCHED:
                    if self._limit == _INFINITY:
                        self._limit = self._dist[left] + 1
                elif self._dist[mate] == _INFINITY:
                    self._dist[mate] = self._dist[left] + 1
                    queue.append(mate)
        return self._limit != _INFINITY

    def _augment(self, root: int) -> bool:
        """Iterative DFS along the BFS layers; flips the path when one is found."""
        stack = [(root, iter(self._adjacent(root)))]
        path: list[tuple[int, int]] = []
        while stack:
            left, candidates = stack[-1]
            advanced = False
            for right in candidates:
                mate = self.pair_right[right]
                if mate == UNMATCHED:
                    if self._limit == self._dist[left] + 1:
                        path.append((left, right))
                        for matched_left, matched_right in path:
                            self.pair_left[matched_left] = matched_right
                            self.pair_right[matched_right] = matched_left
                        return True
                elif self._dist[mate] == self._dist[left] + 1:
                    path.append((left, right))
                    stack.append((mate, iter(self._adjacent(mate))))
                    advanced = True
                    break
            if not advanced:
                self._dist[left] = _INFINITY
                stack.pop()
                if path:
                    path.pop()
        return False

    def run(self) -> int:
        """Compute a maximum matching and return its size."""
        matched = sum(1 for right in self.pair_left if right != UNMATCHED)
        while self._layer():
            self.phases += 1
            for left in range(self._size):
                if self.pair_left[left] == UNMATCHED and self._augment(left):
                    matched += 1
            logger.debug("Matching phase %d: %d/%d matched", self.phases, matched, self._size)
        return matched

    @property
    def is_perfect(self) -> bool:
        return UNMATCHED not in self.pair_left
