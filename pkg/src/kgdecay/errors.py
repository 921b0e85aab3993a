"""Shared exception types."""


class GridMismatchError(ValueError):
    """Field data and grid disagree (shape or identity)."""


class ConfigurationError(ValueError):
    """A run or geometry configuration violates its constraints."""


class InvariantError(RuntimeError):
    """An internal invariant that should hold by construction was violated."""
