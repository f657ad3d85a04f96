"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class UnreachableError(DomainError):
    """A requested causal contact can never happen in the given cosmology."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    The best available estimate is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message: str, value: float = float("nan"), error: float = float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class ConfigError(ValueError):
    """Malformed run configuration; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
