"""
Errors raised while generating or loading datasets.
"""


class DataGenError(ValueError):
    """Base class for invalid generator input."""


class GuardExceeded(DataGenError):
    """The requested run exceeds a cost guard."""


class InvalidCurvatureRadius(DataGenError):
    """A positively curved disc of radius 1 needs sqrt(K) < pi."""


class ParseError(DataGenError):
    """A dataset file has a malformed line."""

    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class InconsistentIndices(DataGenError):
    """Node, edge and graph indices disagree across dataset files."""


class InvalidLabelSet(DataGenError):
    """Graph labels are not a binary {-1, 1} or {0, 1} set."""
