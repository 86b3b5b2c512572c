"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Input text is not well-formed JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(ValueError):
    """Well-formed input that violates the schema; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class InvalidPathError(ValueError):
    """A differentiation path with some step larger than its position."""


class ConvergenceFailure(RuntimeError):
    """Fixed-point iteration for implicit stages did not converge."""

    def __init__(self, message: str, trace: list[float]):
        self.trace = trace
        super().__init__(message)


class NumericalOverflow(ArithmeticError):
    """The floating-point state became non-finite."""
