"""
Errors raised while computing and using saliency maps.
"""


class InterpretError(ValueError):
    """Base class for invalid interpretation input."""


class Misalignment(InterpretError):
    """Scores and diagram points do not line up."""


class InvalidPercentile(InterpretError):
    """Percentiles must lie in [0, 100)."""
