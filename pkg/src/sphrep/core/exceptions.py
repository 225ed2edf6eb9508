"""Custom exceptions for sphrep.

Every error carries an ``exit_code`` that the CLI hands to ``typer.Exit``:
1 for bad input, 2 for numerical non-convergence, 3 for a failed certificate.
"""

from typing import ClassVar

__all__ = [
    "BudgetExceededError",
    "CertificateInvalidError",
    "DegreeParityError",
    "DimensionMismatchError",
    "DimensionTooSmallError",
    "EdgeNotInGraphError",
    "GirthTooSmallError",
    "GraphMismatchError",
    "GraphParseError",
    "InsufficientDimensionError",
    "InvalidOptionsError",
    "NoConvergenceError",
    "NoPairingError",
    "NotConnectedError",
    "NotConvergedError",
    "NotPSDError",
    "NotRegularError",
    "NotUnitError",
    "OutOfRangeError",
    "RejectionLimitError",
    "SelfLoopError",
    "SphrepError",
    "StarViolatedError",
    "TooCloseError",
    "TrivialGraphError",
    "UnknownGraphError",
    "WrongDimensionError",
    "ZeroVectorError",
]


class SphrepError(Exception):
    """Base exception for sphrep."""

    exit_code: ClassVar[int] = 1


# =============================================================================
# Graph input and structure
# =============================================================================


class GraphParseError(SphrepError):
    """Malformed or unreadable edge-list input."""


class UnknownGraphError(SphrepError):
    """Unknown generator name or malformed generator parameters."""


class OutOfRangeError(SphrepError):
    """Vertex id outside ``0..n-1``."""


class SelfLoopError(SphrepError):
    """Edge joining a vertex to itself."""


class EdgeNotInGraphError(SphrepError):
    """An edge argument is not an edge of the graph."""


class BudgetExceededError(SphrepError):
    """Cycle enumeration visited more search nodes than allowed."""


class DegreeParityError(SphrepError):
    """``n * d`` is odd, so no d-regular graph on n vertices exists."""


class RejectionLimitError(SphrepError):
    """The pairing model kept producing loops or multi-edges."""


class NotRegularError(SphrepError):
    """Operation requires a regular graph."""


class NotConnectedError(SphrepError):
    """Operation requires a connected graph."""


class TrivialGraphError(SphrepError):
    """Graph has fewer than two vertices."""


class GraphMismatchError(SphrepError):
    """Primal solution and dual certificate belong to different graphs."""


# =============================================================================
# Linear algebra and representations
# =============================================================================


class DimensionMismatchError(SphrepError):
    """Matrix or vector shapes do not fit together."""


class NoConvergenceError(SphrepError):
    """Iterative eigensolver hit its sweep cap."""

    exit_code: ClassVar[int] = 2


class NotPSDError(SphrepError):
    """Matrix has an eigenvalue below the negative tolerance."""


class ZeroVectorError(SphrepError):
    """Rayleigh quotient of the zero vector."""


class NotUnitError(SphrepError):
    """Representation columns are not unit vectors."""

    exit_code: ClassVar[int] = 3


class InsufficientDimensionError(SphrepError):
    """Requested drawing dimension is not available."""


class WrongDimensionError(SphrepError):
    """Representation has the wrong number of rows for this operation."""


class DimensionTooSmallError(SphrepError):
    """Ambient dimension too small for the projection check."""


# =============================================================================
# Solver and certificates
# =============================================================================


class InvalidOptionsError(SphrepError):
    """Solver or render options out of range."""


class NotConvergedError(SphrepError):
    """Solver residuals are above tolerance at the iteration caps."""

    exit_code: ClassVar[int] = 2


class CertificateInvalidError(SphrepError):
    """Dual slack matrix failed its positive-semidefiniteness check."""

    exit_code: ClassVar[int] = 3


class TooCloseError(SphrepError):
    """Edges are closer than ``2k + 2``."""


class NoPairingError(SphrepError):
    """No perfect matching between far-apart edges exists."""


class GirthTooSmallError(SphrepError):
    """Graph girth does not exceed ``2k + 2``."""


class StarViolatedError(SphrepError):
    """A weight exceeds half of the total weight."""

    exit_code: ClassVar[int] = 3
