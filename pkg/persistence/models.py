"""
Models for simplicial filtrations, graphs and persistence pairs.
"""
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from diagrams.models import DiagramPoint, ExtType, Label, PersistenceDiagram

from .exceptions import InvalidGraph, NonMonotoneFiltration


@dataclass(frozen=True)
class Simplex:
    """A simplex of dimension at most 2 with the value at which it enters."""

    vertices: Tuple[int, ...]
    filtration_value: float

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(int(v) for v in self.vertices)))
        if not 1 <= len(self.vertices) <= 3:
            raise NonMonotoneFiltration(f"Simplex {self.vertices} must have 1 to 3 vertices")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> Tuple[Tuple[int, ...], ...]:
        if self.dim == 0:
            return ()
        return tuple(combinations(self.vertices, self.dim))

    @property
    def sort_key(self):
        return (self.filtration_value, self.dim, self.vertices)


@dataclass(frozen=True)
class Filtration:
    """Simplices in filtration order: by value, then dimension, then vertices."""

    simplices: Tuple[Simplex, ...]

    @classmethod
    def from_simplices(cls, simplices: Iterable[Simplex]) -> "Filtration":
        return cls(tuple(sorted(simplices, key=lambda s: s.sort_key)))

    def __len__(self) -> int:
        return len(self.simplices)

    def index_map(self) -> Dict[Tuple[int, ...], int]:
        return {s.vertices: i for i, s in enumerate(self.simplices)}

    def validate(self) -> None:
        """Check finiteness, ordering and that every face enters no later than its cofaces."""
        index = self.index_map()
        if len(index) != len(self.simplices):
            raise NonMonotoneFiltration("Filtration lists a simplex twice")
        previous = None
        for position, simplex in enumerate(self.simplices):
            if not math.isfinite(simplex.filtration_value):
                raise NonMonotoneFiltration(f"Simplex {simplex.vertices} has a non-finite value")
            if previous is not None and simplex.sort_key < previous:
                raise NonMonotoneFiltration(f"Simplex {simplex.vertices} is out of order")
            previous = simplex.sort_key
            for face in simplex.faces():
                face_index = index.get(face)
                if face_index is None:
                    raise NonMonotoneFiltration(
                        f"Face {face} of {simplex.vertices} is missing from the filtration"
                    )
                if (
                    face_index > position
                    or self.simplices[face_index].filtration_value > simplex.filtration_value
                ):
                    raise NonMonotoneFiltration(
                        f"Face {face} enters after its coface {simplex.vertices}"
                    )


class PairKind(str, Enum):
    FINITE = "finite"
    ESSENTIAL = "essential"


@dataclass(frozen=True)
class PersistencePair:
    birth: float
    death: float
    dim: int

    @property
    def kind(self) -> PairKind:
        return PairKind.FINITE if math.isfinite(self.death) else PairKind.ESSENTIAL


@dataclass(frozen=True)
class PersistencePairs:
    """Birth/death pairs per homology dimension; essential classes die at +inf."""

    pairs: Tuple[PersistencePair, ...] = ()

    def in_dim(self, dim: int) -> Tuple[PersistencePair, ...]:
        return tuple(p for p in self.pairs if p.dim == dim)

    def finite(self, dim: int) -> Tuple[PersistencePair, ...]:
        return tuple(p for p in self.in_dim(dim) if p.kind is PairKind.FINITE)

    def essential(self, dim: int) -> Tuple[PersistencePair, ...]:
        return tuple(p for p in self.in_dim(dim) if p.kind is PairKind.ESSENTIAL)

    def betti(self, threshold: float, dim: int) -> int:
        """Number of classes alive at the threshold."""
        return sum(1 for p in self.in_dim(dim) if p.birth <= threshold < p.death)

    def to_diagram(self, dims: Sequence[int] = (0, 1), label: Label = None) -> PersistenceDiagram:
        """Finite, positive-persistence pairs of the requested dimensions as a diagram."""
        points = tuple(
            DiagramPoint(p.birth, p.death, p.dim, ExtType.NONE)
            for p in self.pairs
            if p.dim in dims and p.kind is PairKind.FINITE and p.birth < p.death
        )
        return PersistenceDiagram(points, label)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes 0..n_nodes-1."""

    n_nodes: int
    edges: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.n_nodes < 0:
            raise InvalidGraph(f"Node count must be nonnegative, got {self.n_nodes}")
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidGraph(f"Self-loop at node {u}")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise InvalidGraph(f"Edge ({u}, {v}) references a node outside 0..{self.n_nodes - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    def sorted_edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    def adjacency(self) -> np.ndarray:
        matrix = np.zeros((self.n_nodes, self.n_nodes), dtype=np.float64)
        for u, v in self.edges:
            matrix[u, v] = matrix[v, u] = 1.0
        return matrix

    def n_components(self) -> int:
        if self.n_nodes == 0:
            return 0
        count, _ = connected_components(csr_matrix(self.adjacency()), directed=False)
        return int(count)

    def cycle_rank(self) -> int:
        return len(self.edges) - self.n_nodes + self.n_components()

