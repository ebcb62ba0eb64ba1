"""
Errors raised while building filtrations and computing persistence.
"""


class PersistenceError(ValueError):
    """Base class for invalid persistence input."""


class DegenerateInput(PersistenceError):
    """Too few points, or all points collinear."""


class DuplicatePoints(PersistenceError):
    """The point set contains coincident points."""


class NonMonotoneFiltration(PersistenceError):
    """A simplex enters before one of its faces."""


class NotAMetricGuard(PersistenceError):
    """A distance matrix is asymmetric, negative or has a nonzero diagonal."""


class TooLarge(PersistenceError):
    """The input exceeds the size guard for clique enumeration."""


class NonPositiveT(PersistenceError):
    """Heat kernel diffusion time must be positive."""


class InvalidGraph(PersistenceError):
    """Self-loops, out-of-range endpoints or a mismatched node function."""
