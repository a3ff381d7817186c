"""Exception types shared across the toolkit."""

from __future__ import annotations


class RefEvalError(Exception):
    """Base class for all refeval errors."""


class ValidationError(RefEvalError):
    """Invalid configuration, criteria, or operation preconditions."""


class CorpusFormatError(RefEvalError):
    """Malformed or inconsistent corpus input.

    Carries the 1-based line number of the offending record when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotFoundError(RefEvalError):
    """Lookup of an unknown researcher or publication."""


class SelectionError(ValidationError):
    """Target-researcher selection cannot satisfy the criteria."""


class UndefinedMetricError(RefEvalError):
    """A ranking metric was requested for an empty ground-truth set."""


class DegenerateSeriesError(RefEvalError):
    """A correlation was requested for a constant or too-short series."""


class KeyMismatchError(ValidationError):
    """Two evaluation tables do not share the same (method, metric) keys."""
