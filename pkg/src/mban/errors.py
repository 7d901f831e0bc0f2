"""Exception types shared across the package."""

from __future__ import annotations


class MbanError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(MbanError, ValueError):
    """Malformed graph, circuit, edge-list or certificate text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TieError(MbanError, ValueError):
    """Majority is undefined: exactly half of the bits are ones."""


class InvalidNetworkError(MbanError, ValueError):
    """The graph has a vertex whose in-degree is even (or zero)."""


class BudgetExceededError(MbanError, RuntimeError):
    """An exhaustive computation would exceed its configured budget."""

    def __init__(self, message: str, progress: int = 0):
        self.progress = progress
        super().__init__(message)


class ReductionError(MbanError, ValueError):
    """A reduction stage rejected its input."""

    def __init__(self, message: str, stage: str | None = None):
        self.stage = stage
        if stage is not None:
            message = f"{stage}: {message}"
        super().__init__(message)
