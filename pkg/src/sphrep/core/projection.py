"""Dimension-reducing projections and the Monte-Carlo check of their distortion.

A representation of rank at most ``k`` is rotated so that its support sits in
the first ``k`` coordinates and nothing is lost. A higher-rank representation
gets a Haar-random orthogonal transform and is truncated; a segment of length
``x`` in ``ℝⁿ`` then has squared projected length ``2x²/n`` on average.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from sphrep.core.exceptions import (
    DimensionTooSmallError,
    InsufficientDimensionError,
    InvalidOptionsError,
)
from sphrep.core.linalg import haar_orthogonal, random_orthogonal
from sphrep.core.representation import RepresentationMatrix

__all__ = [
    "DEFAULT_ANGLE_BINS",
    "AngleHistogram",
    "ProjectionCheck",
    "angle_density",
    "numerical_rank",
    "project",
    "projection_expectation_check",
    "random_projection",
]


logger = logging.getLogger(__name__)

DEFAULT_ANGLE_BINS = 30
RANK_TOL = 1e-10
# Upper bound on the float count of one stacked batch of orthogonal matrices.
_BATCH_ENTRIES = 4_000_000


def _check_target(k: int) -> None:
    if k < 1:
        msg = f"Projection dimension must be at least 1, got {k}"
        raise InsufficientDimensionError(msg)


def _first_rows(data: npt.NDArray[np.float64], k: int) -> RepresentationMatrix:
    if data.shape[0] >= k:
        return RepresentationMatrix(data[:k])
    padding = np.zeros((k - data.shape[0], data.shape[1]))
    return RepresentationMatrix(np.vstack([data, padding]))


def numerical_rank(rep: RepresentationMatrix, tol: float = RANK_TOL) -> int:
    if rep.data.size == 0:
        return 0
    singular = np.linalg.svd(rep.data, compute_uv=False)
    return int(np.sum(singular > tol * max(1.0, float(singular[0]))))


def random_projection(rep: RepresentationMatrix, k: int, seed: int) -> RepresentationMatrix:
    """Apply a seeded Haar-random orthogonal map and keep the first ``k`` rows."""
    _check_target(k)
    q = random_orthogonal(rep.rank, seed)
    return _first_rows(q @ rep.data, k)


def project(rep: RepresentationMatrix, k: int, seed: int) -> RepresentationMatrix:
    """Reduce ``rep`` to ``k`` rows.

    With ``rank(R) <= k`` the left singular vectors rotate the support onto the
    first ``k`` coordinates, which preserves every pairwise distance. Otherwise
    the reduction is :func:`random_projection`. Both maps are linear, so a
    barycentre-0 input stays barycentre-0.
    """
    _check_target(k)
    if rep.rank < 1:
        msg = "Cannot project a representation with no rows"
        raise InsufficientDimensionError(msg)
    if numerical_rank(rep) <= k:
        u, _, _ = np.linalg.svd(rep.data, full_matrices=True)
        return _first_rows(u.T @ rep.data, k)
    logger.debug("Rank %d exceeds k=%d; projecting randomly (seed=%d)", rep.rank, k, seed)
    return random_projection(rep, k, seed)


# =============================================================================
# Monte-Carlo check
# =============================================================================


def angle_density(n: int, alpha: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Density of the angle between a uniform random line in ``ℝⁿ`` and a fixed plane.

    ``(n-2)·cos α·sin^{n-3} α`` on ``[0, π/2]``; ``n - 2`` is the exact
    normaliser.
    """
    a = np.asarray(alpha, dtype=np.float64)
    return (n - 2) * np.cos(a) * np.sin(a) ** (n - 3)


@dataclass(frozen=True)
class AngleHistogram:
    edges: tuple[float, ...]
    empirical: tuple[float, ...]
    predicted: tuple[float, ...]

    @property
    def max_deviation(self) -> float:
        return max(abs(e - p) for e, p in zip(self.empirical, self.predicted, strict=True))

    def to_json(self) -> dict[str, Any]:
        return {
            "edges": list(self.edges),
            "empirical": list(self.empirical),
            "predicted": list(self.predicted),
        }


@dataclass(frozen=True)
class ProjectionCheck:
    """Empirical mean squared projected length against ``2x²/n``."""

    n: int
    x: float
    trials: int
    seed: int
    empirical_mean: float
    predicted: float
    standard_error: float
    histogram: AngleHistogram | None

    def passes(self, sigmas: float = 3.0) -> bool:
        return abs(self.empirical_mean - self.predicted) <= sigmas * self.standard_error

    @property
    def relative_error(self) -> float:
        if self.predicted == 0:
            return abs(self.empirical_mean)
        return abs(self.empirical_mean - self.predicted) / self.predicted

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "x": self.x,
            "trials": self.trials,
            "empirical_mean": self.empirical_mean,
            "predicted": self.predicted,
            "standard_error": self.standard_error,
            "pass": self.passes(),
            "histogram": None if self.histogram is None else self.histogram.to_json(),
        }


def _projected_cosines(n: int, trials: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    """``‖P₂ Q e₁‖`` for ``trials`` Haar matrices Q, computed in stacked batches."""
    batch = max(1, min(trials, _BATCH_ENTRIES // (n * n)))
    chunks: list[npt.NDArray[np.float64]] = []
    remaining = trials
    while remaining:
        count = min(batch, remaining)
        q = haar_orthogonal(n, rng, count)
        chunks.append(np.hypot(q[:, 0, 0], q[:, 1, 0]))
        remaining -= count
    return np.concatenate(chunks)


def projection_expectation_check(
    n: int, x: float, trials: int, seed: int, bins: int = DEFAULT_ANGLE_BINS
) -> ProjectionCheck:
    """Project a fixed segment of length ``x`` in ``ℝⁿ`` onto random planes.

    Each trial applies an independent Haar orthogonal map to the segment and
    keeps the first two coordinates, exactly as :func:`random_projection` does
    for a two-column representation. The angle between the segment and the
    plane is histogrammed against :func:`angle_density`.

    Raises:
        DimensionTooSmallError: ``n < 3``.
        InvalidOptionsError: ``trials < 1`` or ``bins < 1``.
    """
    if n < 3:
        msg = f"The projection check needs n >= 3, got {n}"
        raise DimensionTooSmallError(msg)
    if trials < 1 or bins < 1:
        msg = f"trials and bins must be positive, got trials={trials}, bins={bins}"
        raise InvalidOptionsError(msg)

    predicted = 2 * x * x / n
    if x == 0:
        return ProjectionCheck(n, x, trials, seed, 0.0, predicted, 0.0, None)

    cosines = _projected_cosines(n, trials, np.random.default_rng(seed))
    squared = (x * cosines) ** 2
    mean = float(squared.mean())
    spread = float(squared.std(ddof=1)) if trials > 1 else 0.0
    standard_error = spread / math.sqrt(trials)

    angles = np.arccos(np.clip(cosines, 0.0, 1.0))
    counts, edges = np.histogram(angles, bins=bins, range=(0.0, math.pi / 2))
    width = edges[1] - edges[0]
    centres = (edges[:-1] + edges[1:]) / 2
    histogram = AngleHistogram(
        edges=tuple(edges.tolist()),
        empirical=tuple((counts / (trials * width)).tolist()),
        predicted=tuple(angle_density(n, centres).tolist()),
    )
    logger.info(
        "Projection check n=%d x=%g: mean %.6g, predicted %.6g (SE %.2g)",
        n,
        x,
        mean,
        predicted,
        standard_error,
    )
    return ProjectionCheck(n, x, trials, seed, mean, predicted, standard_error, histogram)
