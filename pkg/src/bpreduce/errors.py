from __future__ import annotations


class InputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class ParseError(InputError):
    """Malformed text input; carries the offending line or column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.column = column


class GuardRefusal(RuntimeError):
    """Raised when a computation would exceed a configured size guard."""
