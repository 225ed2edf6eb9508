"""Representation matrices and the functionals measured on them.

A representation matrix has one column per vertex; column ``v`` is the position
``r(v)``. Its Gram matrix ``RᵀR`` is the SDP variable, so everything here is
invariant under orthogonal maps applied on the left.
"""

import logging
from dataclasses import dataclass
from typing import Any, NamedTuple, Self

import numpy as np
import numpy.typing as npt

from sphrep.core.exceptions import (
    DimensionMismatchError,
    InsufficientDimensionError,
    NotConnectedError,
    NotRegularError,
    NotUnitError,
)
from sphrep.core.graph import Graph, is_connected
from sphrep.core.linalg import EigenMethod, SpectralData, sym_eigen

__all__ = [
    "UNIT_TOL",
    "RepresentationMatrix",
    "Residuals",
    "RhoReport",
    "adjacency_spectrum",
    "edge_lengths",
    "energy",
    "random_unit_barycentre",
    "rho_edges",
    "rho_report",
    "rho_rows",
    "spectral_drawing",
    "validate",
]


logger = logging.getLogger(__name__)

UNIT_TOL = 1e-9
"""Column-norm tolerance used when a representation is asserted to be unit."""


@dataclass(frozen=True, eq=False)
class RepresentationMatrix:
    """An ``r x n`` matrix whose column ``v`` is the position of vertex ``v``."""

    data: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        array = np.array(self.data, dtype=np.float64)
        if array.ndim != 2:
            msg = f"A representation matrix must be 2-D, got shape {array.shape}"
            raise DimensionMismatchError(msg)
        array.flags.writeable = False
        object.__setattr__(self, "data", array)

    @property
    def rank(self) -> int:
        """Row count r (the ambient dimension, not the matrix rank)."""
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def column(self, v: int) -> npt.NDArray[np.float64]:
        return self.data[:, v]

    def gram(self) -> npt.NDArray[np.float64]:
        """``X = RᵀR``."""
        return self.data.T @ self.data

    def to_json(self) -> dict[str, Any]:
        return {
            "rows": self.rank,
            "cols": self.cols,
            "data": self.data.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> Self:
        rows, cols = int(payload["rows"]), int(payload["cols"])
        flat = np.asarray(payload["data"], dtype=np.float64)
        if flat.size != rows * cols:
            msg = f"Representation JSON declares {rows}x{cols} but holds {flat.size} values"
            raise DimensionMismatchError(msg)
        return cls(flat.reshape(rows, cols))


def _check_columns(graph: Graph, rep: RepresentationMatrix) -> None:
    if rep.cols != graph.n:
        msg = f"Representation has {rep.cols} columns but the graph has {graph.n} vertices"
        raise DimensionMismatchError(msg)


# =============================================================================
# Functionals
# =============================================================================


def rho_edges(graph: Graph, rep: RepresentationMatrix) -> float:
    """ρ(G, r): sum over edges of the inner products of the endpoint positions."""
    _check_columns(graph, rep)
    if graph.m == 0:
        return 0.0
    u, v = graph.edge_array.T
    return float(np.einsum("ij,ij->", rep.data[:, u], rep.data[:, v]))


def rho_rows(graph: Graph, rep: RepresentationMatrix) -> float:
    """ρ(G, r) as half the sum over rows of ``r_k A r_kᵀ``."""
    _check_columns(graph, rep)
    return 0.5 * float(np.sum((rep.data @ graph.adjacency_matrix) * rep.data))


def edge_lengths(graph: Graph, rep: RepresentationMatrix) -> npt.NDArray[np.float64]:
    """Euclidean length of every edge, in ``graph.edges`` order."""
    _check_columns(graph, rep)
    u, v = graph.edge_array.T
    return np.linalg.norm(rep.data[:, u] - rep.data[:, v], axis=0)


class Residuals(NamedTuple):
    """How far a representation is from being unit and barycentre-0."""

    unit: float
    barycentre: float

    def within(self, tol: float) -> bool:
        return self.unit <= tol and self.barycentre <= tol


def validate(graph: Graph, rep: RepresentationMatrix) -> Residuals:
    """Max ``|‖r(v)‖² - 1|`` over columns and the squared norm of the column sum."""
    _check_columns(graph, rep)
    if graph.n == 0:
        return Residuals(0.0, 0.0)
    norms_sq = np.sum(rep.data * rep.data, axis=0)
    total = rep.data.sum(axis=1)
    return Residuals(
        unit=float(np.max(np.abs(norms_sq - 1.0))),
        barycentre=float(total @ total),
    )


def energy(
    graph: Graph, rep: RepresentationMatrix, tol: float = UNIT_TOL, *, strict: bool = False
) -> float:
    """Sum of squared edge lengths, computed directly.

    ``energy = 2·e(G) - 2·ρ`` holds only for unit representations. For a
    non-unit input the direct sum is still returned and a warning is logged;
    with ``strict=True`` a NotUnitError is raised instead.
    """
    residual = validate(graph, rep).unit
    if residual > tol:
        msg = f"Representation is not unit (max |‖r(v)‖² - 1| = {residual:.3e})"
        if strict:
            raise NotUnitError(msg)
        logger.warning("%s; energy is not 2e(G) - 2ρ", msg)
    return float(np.sum(edge_lengths(graph, rep) ** 2))


# =============================================================================
# Reports
# =============================================================================


def adjacency_spectrum(graph: Graph, method: EigenMethod = "lapack") -> SpectralData:
    return sym_eigen(graph.adjacency_matrix, method=method)


@dataclass(frozen=True)
class RhoReport:
    """Summary of one representation against its graph.

    ``energy`` is ``2·e(G) - 2·rho``; it equals the direct edge-length sum only
    when ``residual_unit`` is negligible. ``upper_bound`` is λ₂·v(G)/2 and is
    ``None`` for irregular graphs.
    """

    rho: float
    energy: float
    upper_bound: float | None
    residual_unit: float
    residual_barycentre: float

    def is_valid(self, tol: float) -> bool:
        return self.residual_unit <= tol and self.residual_barycentre <= tol

    def to_json(self) -> dict[str, Any]:
        return {
            "rho": self.rho,
            "energy": self.energy,
            "upper_bound": self.upper_bound,
            "residual_unit": self.residual_unit,
            "residual_barycentre": self.residual_barycentre,
        }


def rho_report(graph: Graph, rep: RepresentationMatrix) -> RhoReport:
    rho = rho_edges(graph, rep)
    residuals = validate(graph, rep)
    upper: float | None = None
    if graph.is_regular and graph.n >= 2:
        upper = adjacency_spectrum(graph).lambda2 * graph.n / 2
    return RhoReport(
        rho=rho,
        energy=2 * graph.m - 2 * rho,
        upper_bound=upper,
        residual_unit=residuals.unit,
        residual_barycentre=residuals.barycentre,
    )


# =============================================================================
# Constructions
# =============================================================================


def spectral_drawing(
    graph: Graph, k: int, method: EigenMethod = "lapack"
) -> RepresentationMatrix:
    """Rows are the adjacency eigenvectors for λ₂ ≥ … ≥ λ_{k+1}.

    Rows are orthonormal and orthogonal to the all-ones vector, so the drawing
    is barycentre-0; columns are generally not unit. Within a repeated
    eigenvalue the rows depend on the eigensolver's basis.

    Raises:
        NotRegularError: The graph is not regular.
        NotConnectedError: The graph is disconnected.
        InsufficientDimensionError: ``k`` is outside ``1..n-1``.
    """
    if not graph.is_regular:
        msg = "Spectral drawing needs a regular graph"
        raise NotRegularError(msg)
    if not is_connected(graph):
        msg = "Spectral drawing needs a connected graph"
        raise NotConnectedError(msg)
    if not 1 <= k <= graph.n - 1:
        msg = f"Spectral drawing dimension must be in 1..{graph.n - 1}, got {k}"
        raise InsufficientDimensionError(msg)
    spectral = adjacency_spectrum(graph, method)
    return RepresentationMatrix(spectral.eigenvectors[:, 1 : k + 1].T)


def _antipodal(n: int, rank: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    columns = np.empty((rank, n))
    start = 0
    if n % 2:
        basis, _ = np.linalg.qr(rng.standard_normal((rank, 2)))
        angles = 2 * np.pi * np.arange(3) / 3
        columns[:, :3] = basis @ np.vstack([np.cos(angles), np.sin(angles)])
        start = 3
    for v in range(start, n, 2):
        x = rng.standard_normal(rank)
        x /= np.linalg.norm(x)
        columns[:, v] = x
        columns[:, v + 1] = -x
    return columns


def random_unit_barycentre(
    n: int, rank: int, seed: int, max_iters: int = 1000, tol: float = 1e-12
) -> RepresentationMatrix:
    """A random unit barycentre-0 representation (generally far from optimal).

    Alternates between centring the columns and normalising them. When that
    does not settle within ``max_iters`` the columns are built from antipodal
    pairs instead (plus one equilateral triangle for odd ``n``).

    Raises:
        InsufficientDimensionError: No unit barycentre-0 point set exists
            (``n < 2``, or ``rank == 1`` with ``n`` odd).
    """
    if n < 2 or rank < 1 or (rank == 1 and n % 2):
        msg = f"No unit barycentre-0 representation of {n} points in dimension {rank}"
        raise InsufficientDimensionError(msg)
    rng = np.random.default_rng(seed)
    columns = rng.standard_normal((rank, n))
    for _ in range(max_iters):
        columns -= columns.mean(axis=1, keepdims=True)
        norms = np.linalg.norm(columns, axis=0)
        if np.any(norms < 1e-12):
            break
        columns /= norms
        total = columns.sum(axis=1)
        if total @ total <= tol * n:
            return RepresentationMatrix(columns)
    logger.debug("Centring did not settle (n=%d, rank=%d); using antipodal pairs", n, rank)
    return RepresentationMatrix(_antipodal(n, rank, rng))
