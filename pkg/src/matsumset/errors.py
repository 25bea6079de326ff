"""Exception hierarchy shared by every module.

Each class carries an ``exit_code`` used by the command line front end so that
every failure path maps to a documented process status.
"""

from __future__ import annotations


class MatsumsetError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ConfigInvalid(MatsumsetError, ValueError):
    exit_code = 2


class NotPrime(ConfigInvalid):
    def __init__(self, p: int):
        super().__init__(f"not a prime: {p}")
        self.p = p


class SizeExceeded(ConfigInvalid):
    pass


class CtxMismatch(MatsumsetError, ValueError):
    """Operands live in different fields or have different dimensions."""

    exit_code = 2


class Singular(MatsumsetError, ZeroDivisionError):
    """A matrix that must be invertible has determinant zero."""

    exit_code = 2


class SingularH(Singular):
    pass


class CapExceeded(MatsumsetError):
    """An exhaustive scan would exceed the configured cap."""

    exit_code = 3

    def __init__(self, required: int, cap: int, what: str = "scan"):
        super().__init__(f"{what} requires {required} items, cap is {cap}")
        self.required = required
        self.cap = cap


class RangeTooLarge(ConfigInvalid):
    pass


class IoFailure(MatsumsetError, OSError):
    exit_code = 4


class SchemaMismatch(MatsumsetError):
    exit_code = 5


class ParseError(MatsumsetError, ValueError):
    exit_code = 6
