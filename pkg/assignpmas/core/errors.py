"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from typing import Any, Optional


class PmasError(Exception):
    """Base class for every error raised by assignpmas."""


class StructuralError(PmasError, ValueError):
    """Malformed input: bad LP rows, out-of-range players, incomplete schemes."""


class SizeLimitError(PmasError):
    """An exhaustive operation was asked to sweep more players than allowed."""

    def __init__(self, operation: str, players: int, limit: int):
        super().__init__(f"{operation} supports at most {limit} players, got {players}")
        self.operation = operation
        self.players = players
        self.limit = limit


class PreconditionError(PmasError, ValueError):
    """A documented precondition does not hold; `witness` names the offending object when known."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class NotInCoreError(PreconditionError):
    """Payoff vector outside the core; `witness` is the violated coalition."""


class NotAdmissibleError(PreconditionError):
    """Matrix is not PMAS-admissible; `witness` is the classification witness."""


class ParseError(PmasError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


class LpError(PmasError):
    """LP-level failure reported to callers that need an optimum."""


class LpInfeasibleError(LpError):
    pass


class LpUnboundedError(LpError):
    pass


def require_players(operation: str, players: int, limit: int) -> None:
    if players > limit:
        raise SizeLimitError(operation, players, limit)
