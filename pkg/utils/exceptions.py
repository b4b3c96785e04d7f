"""Exception hierarchy for the pattern-complexity toolkit."""

from typing import Optional, Sequence


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(ToolkitError, ValueError):
    """Operands live in different ambient dimensions."""

    def __init__(self, expected: int, actual: int, what: str = "operand"):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Dimension mismatch for {what}: expected {expected}, got {actual}"
        )


class PolynomialSyntaxError(ToolkitError, ValueError):
    """Polynomial text does not follow the grammar."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class PreconditionError(ToolkitError, ValueError):
    """An operation was called outside its documented domain."""


class VerificationFailure(ToolkitError):
    """A claim that must hold was refuted; carries the witness."""

    def __init__(
        self,
        message: str,
        position: Optional[Sequence[int]] = None,
        value: Optional[int] = None,
    ):
        self.position = tuple(position) if position is not None else None
        self.value = value
        detail = ""
        if self.position is not None:
            detail = f" (witness {self.position} -> {value})"
        super().__init__(f"{message}{detail}")


class InconclusiveError(ToolkitError):
    """A search budget was exhausted without a decision."""
