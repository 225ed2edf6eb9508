"""Tests for dimension reduction and the projected-length Monte-Carlo check."""

import math

import numpy as np
import pytest

from sphrep.core.exceptions import (
    DimensionTooSmallError,
    InsufficientDimensionError,
    InvalidOptionsError,
)
from sphrep.core.linalg import random_orthogonal
from sphrep.core.projection import (
    angle_density,
    numerical_rank,
    project,
    projection_expectation_check,
    random_projection,
)
from sphrep.core.representation import RepresentationMatrix, random_unit_barycentre


def embedded_hexagon() -> RepresentationMatrix:
    """A planar hexagon rotated into general position in ℝ⁵."""
    angles = 2 * np.pi * np.arange(6) / 6
    flat = np.vstack([np.cos(angles), np.sin(angles), np.zeros((3, 6))])
    return RepresentationMatrix(random_orthogonal(5, seed=2) @ flat)


class TestProject:
    def test_low_rank_input_keeps_all_distances(self):
        rep = embedded_hexagon()
        assert numerical_rank(rep) == 2
        flat = project(rep, 2, seed=0)
        assert flat.rank == 2
        assert flat.gram() == pytest.approx(rep.gram(), abs=1e-12)

    def test_high_rank_input_is_projected_randomly(self):
        rep = random_unit_barycentre(12, 6, seed=3)
        flat = project(rep, 2, seed=9)
        assert np.array_equal(flat.data, random_projection(rep, 2, seed=9).data)
        assert flat.data.sum(axis=1) == pytest.approx(np.zeros(2), abs=1e-9)

    def test_pads_with_zero_rows(self):
        rep = RepresentationMatrix(np.array([[1.0, -1.0]]))
        padded = project(rep, 3, seed=0)
        assert padded.rank == 3
        assert np.all(padded.data[1:] == 0.0)

    def test_random_projection_is_seeded(self):
        rep = random_unit_barycentre(8, 4, seed=0)
        assert np.array_equal(
            random_projection(rep, 2, seed=5).data, random_projection(rep, 2, seed=5).data
        )

    def test_target_dimension(self):
        with pytest.raises(InsufficientDimensionError):
            project(embedded_hexagon(), 0, seed=0)

    def test_empty_representation(self):
        with pytest.raises(InsufficientDimensionError):
            project(RepresentationMatrix(np.zeros((0, 4))), 2, seed=0)


class TestAngleDensity:
    @pytest.mark.parametrize("n", [3, 5, 10, 40])
    def test_integrates_to_one(self, n):
        alpha = np.linspace(0.0, math.pi / 2, 20_001)
        assert np.trapezoid(angle_density(n, alpha), alpha) == pytest.approx(1.0, abs=1e-6)


class TestProjectionCheck:
    def test_mean_matches_two_x_squared_over_n(self):
        check = projection_expectation_check(10, 2.0, trials=20_000, seed=0)
        assert check.predicted == pytest.approx(0.8)
        assert check.relative_error < 0.05
        assert check.passes(sigmas=5)

    def test_histogram(self):
        check = projection_expectation_check(10, 1.0, trials=20_000, seed=1, bins=30)
        histogram = check.histogram
        assert histogram is not None
        assert len(histogram.edges) == 31
        width = histogram.edges[1] - histogram.edges[0]
        assert sum(histogram.empirical) * width == pytest.approx(1.0)
        assert histogram.max_deviation < 0.35

    def test_is_reproducible(self):
        first = projection_expectation_check(6, 1.0, trials=500, seed=4)
        second = projection_expectation_check(6, 1.0, trials=500, seed=4)
        assert first.empirical_mean == second.empirical_mean

    def test_zero_length_segment(self):
        check = projection_expectation_check(5, 0.0, trials=10, seed=0)
        assert check.empirical_mean == 0.0
        assert check.standard_error == 0.0
        assert check.histogram is None
        assert check.passes()
        assert check.to_json()["histogram"] is None

    def test_report_fields(self):
        payload = projection_expectation_check(4, 1.0, trials=100, seed=0).to_json()
        assert payload["predicted"] == pytest.approx(0.5)
        assert isinstance(payload["pass"], bool)
        assert len(payload["histogram"]["predicted"]) == 30

    def test_dimension_too_small(self):
        with pytest.raises(DimensionTooSmallError):
            projection_expectation_check(2, 1.0, trials=10, seed=0)

    @pytest.mark.parametrize(("trials", "bins"), [(0, 30), (10, 0)])
    def test_positive_counts(self, trials, bins):
        with pytest.raises(InvalidOptionsError):
            projection_expectation_check(5, 1.0, trials=trials, seed=0, bins=bins)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [3, 10, 50])
    def test_large_run(self, n):
        check = projection_expectation_check(n, 1.0, trials=100_000, seed=n)
        assert check.passes(sigmas=5)
