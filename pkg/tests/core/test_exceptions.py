"""Tests for the exception hierarchy and its exit codes."""

import pytest

from sphrep.core import exceptions
from sphrep.core.exceptions import (
    CertificateInvalidError,
    GraphParseError,
    NoConvergenceError,
    NotConvergedError,
    NotUnitError,
    SphrepError,
    StarViolatedError,
)


@pytest.mark.parametrize("name", exceptions.__all__)
def test_every_error_derives_from_the_base(name):
    assert issubclass(getattr(exceptions, name), SphrepError)


@pytest.mark.parametrize(
    ("error", "code"),
    [
        (GraphParseError, 1),
        (NoConvergenceError, 2),
        (NotConvergedError, 2),
        (CertificateInvalidError, 3),
        (NotUnitError, 3),
        (StarViolatedError, 3),
    ],
)
def test_exit_codes(error, code):
    assert error("boom").exit_code == code
