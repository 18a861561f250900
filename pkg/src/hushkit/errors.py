"""Shared exception types."""


class ValidationError(ValueError):
    """Raised when an input value or configuration field is invalid.

    Messages always name the offending field (or file) so callers can
    surface actionable errors.
    """
