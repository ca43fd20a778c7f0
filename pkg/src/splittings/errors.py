"""Error types shared across the package.

IdentityViolation is special: it signals that a mathematical identity the
code relies on failed at runtime, which is always a bug in this package,
never a property of the input. The CLI maps it to exit code 2.
"""

from __future__ import annotations


class SplittingsError(Exception):
    """Root of the package's error hierarchy."""


# -- orbifold ---------------------------------------------------------------

class ConeOrderTooSmall(SplittingsError):
    pass


class CornerOrderTooSmall(SplittingsError):
    pass


class EmptyMixedWord(SplittingsError):
    pass


class InvalidCircle(SplittingsError):
    """Corner order attached to a non mirror-mirror adjacency, a missing
    corner at a mirror-mirror adjacency, or a self-corner on a closed
    mirror circle."""


class InvalidOrbifold(SplittingsError):
    """Structurally impossible surface data (negative genus, or a
    non-orientable surface with zero cross-caps)."""


class NotHyperbolic(SplittingsError):
    pass


# -- gbs --------------------------------------------------------------------

class Disconnected(SplittingsError):
    pass


class ZeroLabel(SplittingsError):
    pass


class InvalidPath(SplittingsError):
    """A word's items do not form a closed edge path at its base vertex."""


class IdentityViolation(SplittingsError):
    """A mathematical self-check failed; always a bug, never bad input."""


# -- cylinders ---------------------------------------------------------------

class UnclassedEnd(SplittingsError):
    pass


class MissingFlag(SplittingsError):
    pass


# -- cli_io -------------------------------------------------------------------

class DocumentSyntaxError(SplittingsError):
    """Malformed document text. Carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SemanticError(SplittingsError):
    """Well-formed text denoting an invalid object; wraps a module error."""
