"""
Models for persistence diagrams.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .exceptions import InvalidPoint


class ExtType(str, Enum):
    """Extended persistence type of a point; NONE marks ordinary persistence."""

    ORDINARY = "ord"
    RELATIVE = "rel"
    EXTENDED_PLUS = "extp"
    EXTENDED_MINUS = "extm"
    NONE = "-"


# One-hot order used by featurization.
EXT_TYPE_ORDER = (
    ExtType.ORDINARY,
    ExtType.RELATIVE,
    ExtType.EXTENDED_PLUS,
    ExtType.EXTENDED_MINUS,
)

Label = Union[int, float, None]


@dataclass(frozen=True)
class DiagramPoint:
    """A (birth, death) pair tagged with homology dimension and extended type."""

    birth: float
    death: float
    hom_dim: int = 0
    ext_type: ExtType = ExtType.NONE

    def __post_init__(self):
        if self.hom_dim < 0:
            raise InvalidPoint(f"Homology dimension must be nonnegative, got {self.hom_dim}")
        if math.isnan(self.birth) or math.isnan(self.death):
            raise InvalidPoint("Birth and death must not be NaN")
        if self.ext_type is ExtType.NONE:
            if not self.birth < self.death:
                raise InvalidPoint(
                    f"Ordinary point needs birth < death, got ({self.birth}, {self.death})"
                )
        elif not (math.isfinite(self.birth) and math.isfinite(self.death)):
            raise InvalidPoint(
                f"Extended point ({self.birth}, {self.death}) must have finite coordinates"
            )

    @property
    def key(self) -> Tuple[int, ExtType]:
        """Points may only be matched to points with the same key."""
        return (self.hom_dim, self.ext_type)

    @property
    def lifetime(self) -> float:
        return abs(self.death - self.birth)


@dataclass(frozen=True)
class PersistenceDiagram:
    """A finite multiset of diagram points with an optional target label."""

    points: Tuple[DiagramPoint, ...] = ()
    label: Label = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[Sequence[float]],
        hom_dim: int = 0,
        ext_type: ExtType = ExtType.NONE,
        label: Label = None,
    ) -> "PersistenceDiagram":
        return cls(
            tuple(DiagramPoint(float(b), float(d), hom_dim, ext_type) for b, d in pairs),
            label,
        )

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def coordinates(self) -> np.ndarray:
        """Array of shape [n, 2] holding (birth, death)."""
        if not self.points:
            return np.zeros((0, 2))
        return np.array([[p.birth, p.death] for p in self.points], dtype=np.float64)

    def keys(self) -> list:
        return [p.key for p in self.points]

    def has_infinite_points(self) -> bool:
        return any(not math.isfinite(p.death) for p in self.points)

    def subset(self, indices: Iterable[int]) -> "PersistenceDiagram":
        return PersistenceDiagram(tuple(self.points[i] for i in indices), self.label)

    def permuted(self, order: Sequence[int]) -> "PersistenceDiagram":
        return self.subset(order)

    def shifted(self, offset: float) -> "PersistenceDiagram":
        return PersistenceDiagram(
            tuple(
                DiagramPoint(p.birth + offset, p.death + offset, p.hom_dim, p.ext_type)
                for p in self.points
            ),
            self.label,
        )

    def with_label(self, label: Label) -> "PersistenceDiagram":
        return PersistenceDiagram(self.points, label)


@dataclass(frozen=True)
class FeaturizedDiagram:
    """
    Network input for one diagram: one row per point plus a live-point mask.

    All-zero rows occur only at padded positions (mask 0), with one exception:
    an empty diagram is represented by a single live all-zero token.
    """

    vectors: np.ndarray
    mask: np.ndarray

    @property
    def width(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return int(self.vectors.shape[0])


@dataclass(frozen=True)
class MatchingResult:
    """Optimal (partial) matching between two diagrams and its cost."""

    cost: float
    pairs: Tuple[Tuple[int, int], ...] = ()
    unmatched_first: Tuple[int, ...] = ()
    unmatched_second: Tuple[int, ...] = ()
    p: float = field(default=math.inf)

    def __float__(self) -> float:
        return float(self.cost)


@dataclass(frozen=True)
class DiagramDataset:
    """Labeled diagrams with a train/test split and free-form metadata."""

    diagrams: Tuple[PersistenceDiagram, ...]
    split: Dict[str, List[int]] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "diagrams", tuple(self.diagrams))

    def __len__(self) -> int:
        return len(self.diagrams)

    @property
    def labels(self) -> List[Label]:
        return [d.label for d in self.diagrams]

    def part(self, name: str) -> List[PersistenceDiagram]:
        return [self.diagrams[i] for i in self.split.get(name, [])]

    @property
    def train(self) -> List[PersistenceDiagram]:
        return self.part("train")

    @property
    def test(self) -> List[PersistenceDiagram]:
        return self.part("test")

    def replace_diagrams(self, diagrams: Sequence[PersistenceDiagram], **metadata) -> "DiagramDataset":
        """Same split, new diagrams; keyword arguments are merged into the metadata."""
        return DiagramDataset(tuple(diagrams), dict(self.split), {**self.metadata, **metadata})
