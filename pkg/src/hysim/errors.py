"""Exception hierarchy shared across the package.

Positioned errors carry a 1-based (line, col) pair pointing into the
source text that produced them; (0, 0) means "no position available".
"""

from __future__ import annotations


class HysimError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, pos: tuple[int, int] = (0, 0)):
        self.message = message
        self.pos = pos
        super().__init__(self._format())

    def _format(self) -> str:
        line, col = self.pos
        if line:
            return f"{self.message} (line {line}, col {col})"
        return self.message


class LexError(HysimError):
    """Unknown character or malformed token in the source text."""


class ParseError(HysimError):
    """Token stream does not match the grammar."""


class TypeCheckError(HysimError):
    """Boolean/real misuse: arithmetic over booleans, real-typed guards."""


class StructureError(HysimError):
    """Well-formed syntax in an illegal position (e.g. a variant array
    initializer below top level or after continuous statements)."""


class RangeError(HysimError):
    """Bad range literal: descending bounds or non-integer endpoints."""


class EvalError(HysimError):
    """Runtime arithmetic failure: division by zero, sqrt of a negative,
    or a non-finite derivative value."""


class UndefinedVariable(HysimError):
    """An expression read a variable that was never assigned."""

    def __init__(self, name: str, pos: tuple[int, int] = (0, 0)):
        self.name = name
        super().__init__(f"undefined variable '{name}'", pos)


class ZeroTimeProgress(HysimError):
    """A loop kept iterating without simulated time advancing."""


class ConfigError(HysimError):
    """Invalid simulation or analysis configuration."""


class QueryParseError(HysimError):
    """Malformed histogram query."""


class BatchCapError(HysimError):
    """Variant expansion produced more runs than the configured cap."""
