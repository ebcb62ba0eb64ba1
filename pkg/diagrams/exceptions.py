"""
Errors raised by the diagram data model and distance computations.
"""


class DiagramError(ValueError):
    """Base class for invalid diagram input."""


class InvalidPoint(DiagramError):
    """A point violates the birth/death ordering of its type."""


class SizeMismatch(DiagramError):
    """Full bijections need diagrams of equal cardinality."""


class InvalidP(DiagramError):
    """The Wasserstein order must be at least 1 (or infinity)."""


class InfiniteDeath(DiagramError):
    """Distances are only defined for finite points."""


class DimOutOfRange(DiagramError):
    """A point cannot be one-hot encoded with the requested featurization."""


class EmptyBatch(DiagramError):
    """Padding needs at least one diagram."""


class FeatureWidthMismatch(DiagramError):
    """Diagrams in one batch were featurized with different widths."""


class DiagramFormatError(DiagramError):
    """A diagram or manifest file could not be parsed."""
