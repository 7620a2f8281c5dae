"""Errors and source positions shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets and line/column of a parsed element (1-based line and column)."""

    start: int
    end: int
    line: int
    column: int

    def describe(self) -> str:
        return f"line {self.line}, column {self.column}"


class ToolError(Exception):
    """Base class for every error this package raises deliberately."""

    exit_code = 2


class InputError(ToolError):
    """A value handed to an operation is malformed or references unknown elements."""


class PreconditionError(ToolError):
    """An operation's stated precondition does not hold for the given input."""

    def __init__(self, message: str, violations: tuple[str, ...] | list[str] = ()):
        super().__init__(message)
        self.violations = tuple(violations)


class UnsupportedStructureError(ToolError):
    """The input uses a shape this tool deliberately rejects (e.g. nested restriction)."""


class UnsupportedFeatureError(ToolError):
    """The input format uses a feature outside the supported subset."""


class ParseError(ToolError):
    """Syntax or reference error in a textual input; always carries a span."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} ({span.describe()})")
        self.span = span


class FiniteNetViolationError(ParseError):
    """A defining equation contains a restriction, which the equation store forbids."""


class ResourceLimitError(ToolError):
    """State-space exploration exceeded its configured cap."""

    exit_code = 3

    def __init__(self, message: str, explored: int, frontier: int):
        super().__init__(message)
        self.explored = explored
        self.frontier = frontier
