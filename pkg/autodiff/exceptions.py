"""
Errors raised by the differentiation engine.
"""


class AutodiffError(ValueError):
    """Base class for invalid tensor operations."""


class ShapeMismatch(AutodiffError):
    """Operand shapes are incompatible for the requested op."""


class AllMaskedRow(AutodiffError):
    """A masked softmax or masked pooling row has no live position."""


class NotScalar(AutodiffError):
    """backward() was called on a tensor with more than one element."""


class CheckpointError(AutodiffError):
    """A parameter checkpoint is missing, malformed or inconsistent."""
