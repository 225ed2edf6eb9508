"""Tests for the ``python -m sphrep`` entrypoint wiring."""

from sphrep import __main__, __version__
from sphrep.cli import app


def test_main_is_wired_to_the_cli():
    assert callable(__main__.main)
    assert __main__.app is app


def test_version_is_a_string():
    assert isinstance(__version__, str)
    assert __version__
