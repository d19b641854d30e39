"""Shared exception types."""

from __future__ import annotations


class ParseError(ValueError):
    """Syntax error in a formula or instance text, with a character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class GuardLimitError(RuntimeError):
    """An enumeration would exceed a configured resource guard.

    Guards are refusal bounds for exponential enumerations; callers can
    raise them explicitly where they know what they are doing.
    """
