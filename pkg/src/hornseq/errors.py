"""Exception types shared across the package."""


class HornError(Exception):
    """Base class for all hornseq errors."""


class ProgramSyntaxError(HornError, ValueError):
    """Raised on malformed program or interpretation text.

    Carries the 1-based line and column of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class AlphabetError(HornError, ValueError):
    """An atom occurs outside the alphabet context it must live in."""


class BoundExceededError(HornError, RuntimeError):
    """An exhaustive sweep or oracle was asked to exceed its configured bound."""


class InternalError(HornError, RuntimeError):
    """An invariant the implementation relies on was violated."""
