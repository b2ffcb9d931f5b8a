"""Exception types raised across the package."""

from __future__ import annotations


class MlindexError(Exception):
    """Base class for all package errors."""


class InputError(MlindexError, ValueError):
    """Malformed or inconsistent input."""


class NonPrime(InputError):
    pass


class Reducible(InputError):
    pass


class DivisionByZero(MlindexError, ZeroDivisionError):
    pass


class DimMismatch(InputError):
    pass


class DependentBasis(InputError):
    pass


class KindMismatch(InputError):
    pass


class ArityMismatch(InputError):
    pass


class InvalidMap(InputError):
    """A multilinear map whose coefficient store violates its invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SmallCharacteristic(InputError):
    pass


class NotHomogeneous(InputError):
    pass


class MixedDegrees(InputError):
    pass


class AllZero(InputError):
    pass


class EmptyEdgeSet(InputError):
    pass


class CharDividesOrder(InputError):
    pass


class InfeasibleRange(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{message} at line {line}, column {col}")


class BudgetExceeded(MlindexError):
    """An exhaustive search visited more candidates than its guard allows."""

    def __init__(self, message: str, level: int | None = None):
        self.level = level
        super().__init__(message)


class ExponentOverflow(MlindexError):
    pass
