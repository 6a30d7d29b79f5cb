"""Shared exception types."""


class GuardError(RuntimeError):
    """A requested computation exceeds a configured resource guard."""
