"""
Saliency scores and lifetime-bin profiles.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import Misalignment


class SaliencyTarget(str, Enum):
    """Which input coordinates the gradient norm is taken over."""

    FULL = "full"
    BIRTH_DEATH = "birth_death"


@dataclass(frozen=True)
class SaliencyScores:
    """Nonnegative attribution per live diagram point, in point order."""

    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.ndim != 1:
            raise Misalignment(f"Scores must be one-dimensional, got shape {scores.shape}")
        if np.any(scores < 0) or not np.all(np.isfinite(scores)):
            raise Misalignment("Saliency scores must be finite and nonnegative")
        object.__setattr__(self, "scores", scores)

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class BinProfile:
    """Per lifetime bin: mean over diagrams of the max and of the sum of normalized scores."""

    max_mean: np.ndarray
    sum_mean: np.ndarray

    @property
    def n_bins(self) -> int:
        return len(self.max_mean)
