"""Shared exception types.

The CLI maps ValidationError to exit code 2 and ToleranceError to exit
code 3; everything else is a bug.
"""


class RosenMorseError(Exception):
    """Base class for all package errors."""


class ValidationError(RosenMorseError, ValueError):
    """Invalid parameters, excitations out of range, or domain violations."""


class EvaluationDomainError(ValidationError):
    """A function was evaluated where it is singular or undefined."""


class ToleranceError(RosenMorseError, RuntimeError):
    """A verification residual exceeded its tolerance, or a truncated
    series failed to converge within its hard cap."""
