"""CLI interface for sphrep."""

from sphrep.cli.app import app, main

__all__ = ["app", "main"]
