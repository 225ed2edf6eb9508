"""Tests for Hopcroft-Karp over a lazy neighbour oracle."""

from sphrep.core.matching import UNMATCHED, HopcroftKarp


def matching_is_consistent(matcher: HopcroftKarp) -> bool:
    return all(
        right == UNMATCHED or matcher.pair_right[right] == left
        for left, right in enumerate(matcher.pair_left)
    )


class TestHopcroftKarp:
    def test_complete_bipartite_is_perfect(self):
        matcher = HopcroftKarp(4, lambda left: [0, 1, 2, 3])
        assert matcher.run() == 4
        assert matcher.is_perfect
        assert matching_is_consistent(matcher)

    def test_maximum_but_not_perfect(self):
        adjacency = {0: [0], 1: [0], 2: [1, 2]}
        matcher = HopcroftKarp(3, adjacency.__getitem__)
        assert matcher.run() == 2
        assert not matcher.is_perfect
        assert matching_is_consistent(matcher)

    def test_oracle_is_asked_once_per_vertex(self):
        calls: list[int] = []

        def oracle(left):
            calls.append(left)
            return [(left + 1) % 6, left]

        matcher = HopcroftKarp(6, oracle)
        matcher.run()
        assert sorted(calls) == list(range(6))

    def test_long_augmenting_path(self):
        size = 5000

        def oracle(left):
            return [left + 1, left] if left + 1 < size else [left]

        matcher = HopcroftKarp(size, oracle)
        assert matcher.run() == size
        assert matcher.pair_left == list(range(size))
        assert matcher.phases >= 2

    def test_empty(self):
        matcher = HopcroftKarp(0, lambda left: [])
        assert matcher.run() == 0
        assert matcher.is_perfect

    def test_isolated_left_vertex(self):
        matcher = HopcroftKarp(2, lambda left: [] if left == 0 else [0, 1])
        assert matcher.run() == 1
        assert matcher.pair_left[0] == UNMATCHED
