"""Exception hierarchy shared across the package."""

from __future__ import annotations


class EmoknnError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EmoknnError, ValueError):
    """A contract violation: bad argument, inconsistent state, mismatched shapes."""


class ParseError(EmoknnError, ValueError):
    """A file could not be parsed; carries the offending location when known."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif path is not None:
            where += " "
        super().__init__(where + message)


class MissingInstanceError(EmoknnError, LookupError):
    """An instance id was not found in a store or dataset."""
