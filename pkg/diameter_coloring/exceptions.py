"""
Exception hierarchy for the diameter coloring package.

Semantic outcomes (FAILURE, UNSAT, UNCHANGED) are returned as values; these
exceptions signal invalid input or broken preconditions.
"""

from typing import Optional


class DiameterColoringError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(DiameterColoringError, ValueError):
    """An argument is out of range or malformed."""


class ContractViolation(DiameterColoringError):
    """An operation was called on input that breaks its precondition."""


class ContractionRejected(DiameterColoringError):
    """Two adjacent vertices cannot be merged into one color class."""


class OracleRefusal(DiameterColoringError):
    """The brute-force search space exceeds the configured cap."""


class GenerationError(DiameterColoringError):
    """A generator could not produce an instance within its retry budget."""


class ParseError(DiameterColoringError):
    """An instance file could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class SearchTimeout(DiameterColoringError):
    """Raised inside a search when the configured time limit has passed."""
