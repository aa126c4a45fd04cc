"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ShuffleOpsError(Exception):
    """Base class for every error raised by the package."""


class PresentationError(ShuffleOpsError, ValueError):
    pass


class UndeclaredGenerator(PresentationError):
    pass


class BadArity(PresentationError):
    pass


class SymmetryOnNonBinary(PresentationError):
    pass


class InhomogeneousIdentity(PresentationError):
    pass


class SingularMap(PresentationError):
    pass


class DuplicateLeafLabel(ShuffleOpsError, ValueError):
    pass


class InvalidShuffle(ShuffleOpsError, ValueError):
    pass


class ArityMismatch(ShuffleOpsError, ValueError):
    pass


class UnknownPreset(ShuffleOpsError, ValueError):
    pass


class ZeroPolynomial(ShuffleOpsError, ValueError):
    pass


class OutOfBound(ShuffleOpsError, ValueError):
    pass


class NotQuadratic(ShuffleOpsError, ValueError):
    pass


class PatternMismatch(ShuffleOpsError, ValueError):
    pass


class BoundExceeded(ShuffleOpsError, ValueError):
    """A resource guard on arity or basis size was tripped."""


class DSLSyntaxError(ShuffleOpsError, ValueError):
    """Malformed presentation text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
