"""Exception types raised across the package."""

from __future__ import annotations


class QrotError(Exception):
    """Base class for every error raised by qrot."""


class InvalidInput(QrotError, ValueError):
    """Input that violates an operation's preconditions."""


class CapExceeded(InvalidInput):
    pass


class OddGroundSet(InvalidInput):
    pass


class GroundSetMismatch(InvalidInput):
    pass


class EmptyWord(InvalidInput):
    pass


class NotComparable(InvalidInput):
    pass


class NotNonCrossing(InvalidInput):
    pass


class DegreeExceeded(InvalidInput):
    pass


class DimensionTooSmall(InvalidInput):
    pass


class Singular(QrotError, ArithmeticError):
    """Raised when exact elimination finds no nonzero pivot."""

    def __init__(self, row: int):
        super().__init__(f"matrix is singular: no pivot at row {row}")
        self.row = row


class CacheCorrupted(QrotError):
    """An on-disk Weingarten table failed to parse or validate."""
