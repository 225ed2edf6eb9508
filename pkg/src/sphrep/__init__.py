"""sphrep - Spherical graph representations: solve, certify, bound and draw."""

from sphrep._version import __version__

__all__ = ["__version__"]
