"""Dense symmetric linear algebra shared by every other module.

Eigenvalues are always reported in descending order (λ₁ ≥ λ₂ ≥ … ≥ λₙ) with
each eigenvector's sign fixed so that its largest-magnitude entry is positive.
Within a repeated eigenvalue the basis is whatever the solver produced; callers
may rely on the span only.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from sphrep.core.exceptions import (
    DimensionMismatchError,
    NoConvergenceError,
    NotPSDError,
    ZeroVectorError,
)

__all__ = [
    "DECOMPOSITION_TOL",
    "PSD_TOL",
    "EigenMethod",
    "SpectralData",
    "dot",
    "haar_orthogonal",
    "psd_factor",
    "random_orthogonal",
    "rayleigh",
    "sym_eigen",
    "symmetric",
]


logger = logging.getLogger(__name__)

type Matrix = npt.NDArray[np.float64]
type EigenMethod = Literal["lapack", "jacobi"]

DECOMPOSITION_TOL = 1e-10
PSD_TOL = 1e-8
JACOBI_MAX_SWEEPS = 100


def symmetric(matrix: npt.ArrayLike, tol: float = 0.0) -> Matrix:
    """Return ``matrix`` as a float array after checking it is square and symmetric.

    With ``tol > 0`` small asymmetries are accepted and averaged away.
    """
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        msg = f"Expected a square matrix, got shape {a.shape}"
        raise DimensionMismatchError(msg)
    asymmetry = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asymmetry > tol:
        msg = f"Matrix is not symmetric (max |S - S^T| = {asymmetry:.3e})"
        raise DimensionMismatchError(msg)
    return (a + a.T) / 2 if tol > 0 else a


@dataclass(frozen=True)
class SpectralData:
    """Full eigendecomposition; ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: Matrix

    @property
    def order(self) -> int:
        return len(self.eigenvalues)

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda2(self) -> float:
        """Second largest eigenvalue (counted with multiplicity)."""
        if self.order < 2:
            msg = "λ₂ needs a matrix of order at least 2"
            raise DimensionMismatchError(msg)
        return float(self.eigenvalues[1])

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def eigenspace(self, value: float, tol: float = 1e-8) -> Matrix:
        """Orthonormal basis (as columns) of the eigenspace for ``value``."""
        mask = np.abs(self.eigenvalues - value) <= tol * (1 + abs(value))
        return self.eigenvectors[:, mask]


def _fix_signs(vectors: Matrix) -> Matrix:
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _jacobi(a: Matrix, tol: float) -> tuple[npt.NDArray[np.float64], Matrix]:
    """Cyclic Jacobi rotations until the off-diagonal norm drops below ``tol·‖S‖_F``."""
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    off = 0.0
    for sweep in range(JACOBI_MAX_SWEEPS):
        off = float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))
        if off <= tol * scale:
            logger.debug("Jacobi converged after %d sweeps (n=%d)", sweep, n)
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 if theta == 0.0 else np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    msg = (
        f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps "
        f"(off-diagonal norm {off:.3e}, target {tol * scale:.3e})"
    )
    raise NoConvergenceError(msg)


def sym_eigen(
    matrix: npt.ArrayLike, tol: float = DECOMPOSITION_TOL, method: EigenMethod = "lapack"
) -> SpectralData:
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    Args:
        matrix: Square symmetric matrix.
        tol: Convergence tolerance for the Jacobi method, relative to ``‖S‖_F``.
        method: ``"lapack"`` (``numpy.linalg.eigh``) or ``"jacobi"``.

    Raises:
        DimensionMismatchError: Not square, not symmetric or empty.
        NoConvergenceError: Jacobi hit its sweep cap.
    """
    a = symmetric(matrix)
    if a.shape[0] == 0:
        msg = "Cannot decompose an empty matrix"
        raise DimensionMismatchError(msg)
    if method == "jacobi":
        values, vectors = _jacobi(a, tol)
    else:
        values, vectors = np.linalg.eigh(a)
    order = np.argsort(-values, kind="stable")
    return SpectralData(eigenvalues=values[order], eigenvectors=_fix_signs(vectors[:, order]))


def dot(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """Frobenius inner product ``A ∙ B = trace(AᵀB)``."""
    left = np.asarray(a, dtype=np.float64)
    right = np.asarray(b, dtype=np.float64)
    if left.shape != right.shape:
        msg = f"Cannot take A ∙ B of shapes {left.shape} and {right.shape}"
        raise DimensionMismatchError(msg)
    return float(np.sum(left * right))


def psd_factor(matrix: npt.ArrayLike, tol: float = PSD_TOL) -> Matrix:
    """Factor ``X = RᵀR`` through the eigendecomposition.

    Eigenvalues below ``tol`` are clipped to zero, so ``R`` has ``rank(X)`` rows.

    Raises:
        NotPSDError: The smallest eigenvalue is below ``-tol``.
    """
    spectral = sym_eigen(symmetric(matrix, tol=tol))
    if spectral.min_eigenvalue < -tol:
        msg = f"Matrix is not positive semidefinite: eigenvalue {spectral.min_eigenvalue:.3e}"
        raise NotPSDError(msg)
    keep = spectral.eigenvalues > tol
    roots = np.sqrt(spectral.eigenvalues[keep])
    return roots[:, np.newaxis] * spectral.eigenvectors[:, keep].T


def haar_orthogonal(n: int, rng: np.random.Generator, count: int | None = None) -> Matrix:
    """Haar-distributed orthogonal matrices from QR of Gaussian matrices.

    Columns of Q are flipped so that R has a positive diagonal, which makes the
    factorisation unique and the distribution exactly Haar. With ``count`` a
    stacked ``(count, n, n)`` array is returned.
    """
    shape = (n, n) if count is None else (count, n, n)
    q, r = np.linalg.qr(rng.standard_normal(shape))
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1)).copy()
    signs[signs == 0] = 1.0
    return q * signs[..., np.newaxis, :]


def random_orthogonal(n: int, seed: int) -> Matrix:
    """A seed-deterministic Haar-random ``n x n`` orthogonal matrix."""
    if n < 1:
        msg = f"Orthogonal matrix order must be at least 1, got {n}"
        raise DimensionMismatchError(msg)
    return haar_orthogonal(n, np.random.default_rng(seed))


def rayleigh(matrix: npt.ArrayLike, x: npt.ArrayLike) -> float:
    """Rayleigh quotient ``xᵀSx / xᵀx``."""
    s = np.asarray(matrix, dtype=np.float64)
    v = np.asarray(x, dtype=np.float64)
    if s.shape != (v.size, v.size):
        msg = f"Vector of length {v.size} does not fit a matrix of shape {s.shape}"
        raise DimensionMismatchError(msg)
    norm_sq = float(v @ v)
    if norm_sq == 0.0:
        msg = "Rayleigh quotient of the zero vector is undefined"
        raise ZeroVectorError(msg)
    return float(v @ s @ v) / norm_sq
