"""Tests for the low-rank primal solver and the regular-graph dual certificates."""

import math

import numpy as np
import pytest

from sphrep.core.exceptions import (
    GraphMismatchError,
    InvalidOptionsError,
    NotConnectedError,
    NotConvergedError,
    NotRegularError,
    TrivialGraphError,
)
from sphrep.core.generators import complete, cycle, hypercube, path, petersen, platonic
from sphrep.core.graph import build_graph, disjoint_union
from sphrep.core.representation import rho_edges, spectral_drawing, validate
from sphrep.core.solver import (
    SolverOptions,
    _colour_classes,
    _MixingRun,
    default_rank,
    dual_certificate_regular,
    duality_gap,
    eigenvector_residuals,
    evaluate_dual,
    solution_report,
    solve_primal,
    strict_feasible_point,
    upper_bound_regular,
)


# Tolerance on the solver objective against a known optimum.
OBJECTIVE_TOL = 1e-4


class TestOptions:
    def test_defaults(self):
        opts = SolverOptions()
        assert opts.rank_for(10) == default_rank(10) == 6
        assert SolverOptions(rank=3).rank_for(10) == 3
        assert "seed" not in opts.to_json()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rank": 0},
            {"tol_feas": 0.0},
            {"max_inner": 0},
            {"penalty_init": 2.0, "penalty_max": 1.0},
            {"penalty_growth": 1.0},
            {"restarts": 0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidOptionsError):
            SolverOptions(**kwargs)


class TestSolvePrimal:
    @pytest.mark.parametrize(
        ("graph", "optimum"),
        [
            (petersen(), 5.0),
            (cycle(5), 5 * math.cos(2 * math.pi / 5)),
            (cycle(8), 8 * math.cos(2 * math.pi / 8)),
            (hypercube(3), 4.0),
            (complete(4), -2.0),
            (path(3), -1.0),
            (path(2), -1.0),
        ],
        ids=["petersen", "C5", "C8", "Q3", "K4", "P3", "P2"],
    )
    def test_known_optima(self, graph, optimum):
        solution = solve_primal(graph)
        assert solution.converged
        assert solution.objective == pytest.approx(optimum, abs=OBJECTIVE_TOL)
        assert validate(graph, solution.rep).within(1e-6)
        assert solution.objective == pytest.approx(rho_edges(graph, solution.rep))

    def test_factor_shape(self):
        solution = solve_primal(petersen(), SolverOptions(rank=4, restarts=1))
        assert (solution.rep.rank, solution.rep.cols) == (4, 10)

    def test_is_reproducible(self):
        opts = SolverOptions(seed=17, restarts=2)
        first = solve_primal(cycle(7), opts)
        second = solve_primal(cycle(7), opts)
        assert first.objective == second.objective
        assert np.array_equal(first.rep.data, second.rep.data)

    def test_each_round_ascends(self):
        solution = solve_primal(petersen(), SolverOptions(restarts=1))
        assert solution.trace
        for values in solution.trace:
            assert all(b >= a - 1e-9 for a, b in zip(values, values[1:], strict=False))

    def test_restart_index_is_reported(self):
        solution = solve_primal(cycle(6), SolverOptions(restarts=4))
        assert 0 <= solution.restart < 4

    def test_iteration_caps_flag_non_convergence(self):
        solution = solve_primal(petersen(), SolverOptions(max_outer=1, max_inner=1, restarts=1))
        assert not solution.converged
        with pytest.raises(NotConvergedError, match="did not converge"):
            solution.ensure_converged()

    def test_trivial_graph(self):
        with pytest.raises(TrivialGraphError):
            solve_primal(build_graph(1, []))


class TestMixingRun:
    @pytest.mark.parametrize(
        "graph", [petersen(), cycle(9), path(4), complete(5)], ids=["petersen", "C9", "P4", "K5"]
    )
    def test_colour_classes_partition_into_independent_sets(self, graph):
        classes = _colour_classes(graph)
        seen = sorted(v for colour_class in classes for v in colour_class.vertices)
        assert seen == list(range(graph.n))
        for colour_class in classes:
            members = colour_class.vertices
            assert not any(graph.has_edge(u, v) for u in members for v in members if u < v)

    def test_batched_neighbour_sums(self):
        graph = build_graph(5, [(0, 1), (1, 2), (0, 2)])
        positions = np.arange(10, dtype=float).reshape(5, 2)
        for colour_class in _colour_classes(graph):
            sums = colour_class.neighbour_sums(positions)
            for i, v in enumerate(colour_class.vertices):
                expected = sum((positions[w] for w in graph.adjacency[v]), np.zeros(2))
                assert np.allclose(sums[i], expected)

    @pytest.mark.parametrize("sigma", [0.5, 10.0])
    def test_sweep_gain_is_exact(self, sigma):
        opts = SolverOptions(rank=3, penalty_init=sigma, restarts=1)
        run = _MixingRun(hypercube(4), opts, np.random.default_rng(5))
        run.mu = np.array([0.3, -0.2, 0.1])
        for _ in range(4):
            before = run.lagrangian()
            gain = run.sweep()
            assert gain >= -1e-12
            assert run.lagrangian() - before == pytest.approx(gain, abs=1e-9)
            assert np.allclose(run.total, run.positions.sum(axis=0))

    def test_inner_tolerance_tightens_to_target(self):
        opts = SolverOptions(restarts=1)
        run = _MixingRun(cycle(5), opts, np.random.default_rng(0))
        tolerances = [run._inner_tolerance(k) for k in range(12)]
        assert tolerances[0] == pytest.approx(max(opts.tol_obj, 1e-4))
        assert all(b <= a for a, b in zip(tolerances, tolerances[1:], strict=False))
        assert tolerances[-1] == opts.tol_obj

    def test_unit_rows_after_run(self):
        run = _MixingRun(petersen(), SolverOptions(restarts=1), np.random.default_rng(2))
        run.run()
        assert np.allclose(np.linalg.norm(run.positions, axis=1), 1.0)


class TestDual:
    def test_petersen_certificate(self):
        certificate = dual_certificate_regular(petersen())
        assert certificate.dual_objective == pytest.approx(5.0)
        assert certificate.is_valid()
        assert certificate.min_eig_m == pytest.approx(0.0, abs=1e-9)
        assert set(certificate.to_json()) == {"y", "y0", "dual_objective", "min_eig_m"}

    @pytest.mark.parametrize("name", ["cube", "dodecahedron", "icosahedron"])
    def test_strict_point(self, name):
        assert strict_feasible_point(platonic(name)).min_eig_m >= 1 - 1e-8

    def test_upper_bound(self):
        assert upper_bound_regular(cycle(6)) == pytest.approx(3.0)
        assert upper_bound_regular(hypercube(4)) == pytest.approx(16.0)

    def test_disconnected_bound_warns(self, caplog):
        graph = disjoint_union(cycle(4), cycle(4))
        assert upper_bound_regular(graph) == pytest.approx(2 * 8 / 2)
        assert "disconnected" in caplog.text

    def test_certificate_needs_connected_graph(self):
        with pytest.raises(NotConnectedError):
            dual_certificate_regular(disjoint_union(cycle(4), cycle(4)))

    def test_certificate_needs_regular_graph(self):
        with pytest.raises(NotRegularError):
            dual_certificate_regular(path(4))

    def test_evaluate_dual_detects_infeasible_points(self):
        graph = cycle(5)
        assert not evaluate_dual(graph, np.zeros(5), 0.0).is_valid()
        assert evaluate_dual(graph, np.ones(5), 0.0).is_valid()

    def test_evaluate_dual_shape(self):
        with pytest.raises(GraphMismatchError):
            evaluate_dual(cycle(5), np.zeros(4), 0.0)

    def test_weak_duality_and_zero_gap(self):
        graph = petersen()
        solution = solve_primal(graph)
        gap = duality_gap(solution, dual_certificate_regular(graph))
        assert gap >= -1e-6
        assert gap == pytest.approx(0.0, abs=OBJECTIVE_TOL)

    def test_gap_needs_matching_graphs(self):
        solution = solve_primal(cycle(5), SolverOptions(restarts=1))
        with pytest.raises(GraphMismatchError):
            duality_gap(solution, dual_certificate_regular(petersen()))

    def test_eigenvector_residuals(self):
        graph = petersen()
        residuals = eigenvector_residuals(graph, spectral_drawing(graph, 2), 1.0)
        assert residuals.shape == (2,)
        assert np.all(residuals < 1e-9)


class TestReport:
    def test_regular_graph(self):
        graph = cycle(6)
        report = solution_report(solve_primal(graph), dual_certificate_regular(graph))
        assert report["upper_bound"] == pytest.approx(3.0)
        assert report["gap"] == pytest.approx(0.0, abs=OBJECTIVE_TOL)
        assert report["factor"]["cols"] == 6

    def test_without_certificate(self):
        report = solution_report(solve_primal(path(3), SolverOptions(restarts=1)))
        assert report["upper_bound"] is None
        assert report["gap"] is None
        assert report["converged"] is True
