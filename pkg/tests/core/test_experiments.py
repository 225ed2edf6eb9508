"""Corpus-wide runs of the solver and the certificates.

Everything here is marked ``slow``; run with ``pytest -m slow``.
"""

import math

import numpy as np
import pytest

from sphrep.core.certificates import (
    WeightProfile,
    edge_pairing,
    nilli_identities,
    nilli_vector,
    random_regular_representation,
    weight_repair,
)
from sphrep.core.exceptions import NoPairingError, StarViolatedError
from sphrep.core.generators import (
    PLATONIC_SOLIDS,
    complete,
    complete_bipartite,
    cycle,
    hypercube,
    petersen,
    platonic,
)
from sphrep.core.graph import Graph, count_cycles_upto, expected_cycle_count, random_regular
from sphrep.core.linalg import haar_orthogonal
from sphrep.core.representation import (
    RepresentationMatrix,
    energy,
    random_unit_barycentre,
    rho_edges,
    rho_rows,
)
from sphrep.core.solver import (
    SolverOptions,
    dual_certificate_regular,
    duality_gap,
    eigenvector_residuals,
    solve_primal,
    strict_feasible_point,
    upper_bound_regular,
)

pytestmark = pytest.mark.slow


def _corpus() -> list[tuple[str, Graph]]:
    graphs = [(f"C{n}", cycle(n)) for n in range(4, 13)]
    graphs.append(("petersen", petersen()))
    graphs += [(f"Q{k}", hypercube(k)) for k in (3, 4, 5)]
    graphs += [(f"K{n}", complete(n)) for n in (3, 4, 5, 6)]
    graphs.append(("K3,3", complete_bipartite(3, 3)))
    graphs += [(name, platonic(name)) for name in sorted(PLATONIC_SOLIDS)]
    return graphs


CORPUS = _corpus()
CORPUS_IDS = [name for name, _ in CORPUS]
CORPUS_GRAPHS = [graph for _, graph in CORPUS]


class TestVertexTransitiveCorpus:
    @pytest.mark.parametrize("graph", CORPUS_GRAPHS, ids=CORPUS_IDS)
    def test_solver_reaches_the_eigenvalue_bound(self, graph):
        bound = upper_bound_regular(graph)
        solution = solve_primal(graph)
        assert solution.converged
        assert solution.objective == pytest.approx(bound, rel=1e-4, abs=1e-4)
        assert duality_gap(solution, dual_certificate_regular(graph)) <= 1e-4

    @pytest.mark.parametrize("graph", CORPUS_GRAPHS, ids=CORPUS_IDS)
    def test_optimal_rows_are_eigenvectors(self, graph):
        certificate = dual_certificate_regular(graph)
        solution = solve_primal(graph)
        lambda2 = 2 * certificate.dual_objective / graph.n
        residuals = eigenvector_residuals(graph, solution.rep, lambda2, tol=1e-3)
        assert np.all(residuals < 1e-2)

    @pytest.mark.parametrize("graph", CORPUS_GRAPHS, ids=CORPUS_IDS)
    def test_dual_points(self, graph):
        assert strict_feasible_point(graph).min_eig_m >= 1 - 1e-8
        assert dual_certificate_regular(graph).min_eig_m >= -1e-8

    @pytest.mark.parametrize("graph", CORPUS_GRAPHS, ids=CORPUS_IDS)
    def test_rho_formulas_agree(self, graph):
        for seed in range(5):
            rep = random_unit_barycentre(graph.n, 4, seed=seed)
            rho = rho_edges(graph, rep)
            assert rho_rows(graph, rep) == pytest.approx(rho, rel=1e-12, abs=1e-12)
            assert energy(graph, rep) == pytest.approx(2 * graph.m - 2 * rho, abs=1e-9)

    @pytest.mark.parametrize("graph", CORPUS_GRAPHS, ids=CORPUS_IDS)
    def test_rho_is_orthogonally_invariant(self, graph):
        rep = random_unit_barycentre(graph.n, 3, seed=1)
        q = haar_orthogonal(3, np.random.default_rng(graph.n))
        rotated = RepresentationMatrix(q @ rep.data)
        assert rho_edges(graph, rotated) == pytest.approx(rho_edges(graph, rep), abs=1e-10)


class TestRandomRegularSolver:
    def test_objective_never_beats_the_eigenvalue_bound(self):
        rng = np.random.default_rng(2024)
        for seed in range(200):
            d = int(rng.choice([3, 4, 5]))
            n = int(rng.integers(d + 1, 201))
            if (n * d) % 2:
                n += 1 if n < 200 else -1
            graph = random_regular(n, d, seed=seed)
            solution = solve_primal(graph, SolverOptions(restarts=1, seed=seed))
            assert solution.objective <= upper_bound_regular(graph) + 1e-6, (n, d, seed)

    def test_certificate_solver_bound_sandwich(self):
        normalised = []
        certified = 0
        for seed in range(50):
            graph = random_regular(500, 3, seed=seed)
            solution = solve_primal(graph, SolverOptions(restarts=1, seed=seed))
            assert solution.objective <= upper_bound_regular(graph) + 1e-6
            normalised.append(solution.objective / (graph.n / 2))
            try:
                certificate = random_regular_representation(graph, 3)
            except NoPairingError:
                continue
            assert certificate.rho <= solution.objective + 1e-6
            certified += 1
        assert certified >= 25
        mean = float(np.mean(normalised))
        assert 2 * math.sqrt(2) - 0.5 <= mean <= 2 * math.sqrt(2) + 0.1


class TestNilliIdentities:
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_antipodal_pairs_on_a_long_cycle(self, k):
        graph = cycle(20)
        for u, v in graph.edges:
            e = (u, v)
            ebar = tuple(sorted(((u + 10) % 20, (v + 10) % 20)))
            identities = nilli_identities(graph, nilli_vector(graph, e, ebar, k))
            norm_sq, quad = identities.expected(2, k)
            assert identities.tree_like
            assert identities.norm_sq == pytest.approx(norm_sq, abs=1e-12)
            assert identities.quad == pytest.approx(quad, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_tree_like_pairs_in_random_cubic_graphs(self, seed):
        graph = random_regular(200, 3, seed=seed)
        checked = 0
        for e, ebar in edge_pairing(graph, 1).pairs:
            identities = nilli_identities(graph, nilli_vector(graph, e, ebar, 1))
            if not identities.tree_like:
                continue
            norm_sq, quad = identities.expected(3, 1)
            assert identities.norm_sq == pytest.approx(norm_sq, abs=1e-12)
            assert identities.quad == pytest.approx(quad, abs=1e-12)
            checked += 1
        assert checked > graph.m // 2


class TestCycleStatistics:
    def test_short_cycle_counts_match_the_poisson_means(self):
        samples = 500
        counts = {3: [], 4: [], 5: []}
        for seed in range(samples):
            census = count_cycles_upto(random_regular(200, 3, seed=seed), 5)
            for length, values in counts.items():
                values.append(census.count(length))
        for length, values in counts.items():
            observed = np.asarray(values, dtype=np.float64)
            standard_error = observed.std(ddof=1) / math.sqrt(samples)
            expected = expected_cycle_count(3, length)
            assert abs(observed.mean() - expected) <= 3 * standard_error, length


class TestWeightRepair:
    def test_random_profiles(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            n = int(rng.integers(2, 51))
            f = rng.uniform(0.0, 1.0, n) * rng.choice([1.0, 1e-3, 1e3])
            top = int(np.argmax(f))
            f[top] = min(f[top], f.sum() - f[top])
            weights = weight_repair(WeightProfile(tuple(f.tolist())))
            assert weights.steps <= n
            assert all(g >= 0 for g in weights.weights.values())
            assert np.max(np.abs(weights.vertex_sums() - f)) <= 1e-9 * max(1.0, f.sum())

    def test_violating_profiles_are_rejected(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            f = rng.uniform(0.0, 1.0, int(rng.integers(2, 51)))
            f[0] = f[1:].sum() + rng.uniform(0.01, 1.0)
            with pytest.raises(StarViolatedError, match="Vertex 0"):
                WeightProfile(tuple(f.tolist()))


class TestHaar:
    @pytest.mark.parametrize("n", [3, 5, 10])
    def test_squared_entries_average_one_over_n(self, n):
        q = haar_orthogonal(n, np.random.default_rng(n), count=20_000)
        squared = q[:, 0, 0] ** 2
        standard_error = squared.std(ddof=1) / math.sqrt(squared.size)
        assert abs(squared.mean() - 1 / n) <= 4 * standard_error
