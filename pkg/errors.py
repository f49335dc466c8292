"""Exception hierarchy shared by every Malytics package.

Each domain error also derives from the builtin it refines, so callers that
only know about ``ValueError`` / ``LookupError`` keep working.
"""

from __future__ import annotations


class MalyticsError(Exception):
    """Base class for all pipeline errors (mapped to exit code 2 by the CLI)."""


class DimensionMismatchError(MalyticsError, ValueError):
    pass


class TrainingError(MalyticsError):
    """Training could not produce a model (single class, non-finite input, bad solve)."""


class SplitError(MalyticsError, ValueError):
    pass


class UndefinedMetricError(MalyticsError, ValueError):
    pass


class ManifestError(MalyticsError, ValueError):
    """A manifest row could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class NotAZipError(MalyticsError, ValueError):
    pass


class NoDexEntriesError(MalyticsError, LookupError):
    pass


class UnsupportedCompressionError(MalyticsError, ValueError):
    pass


class ModelFormatError(MalyticsError, ValueError):
    """Model file is truncated, corrupted, or from a newer format version."""
