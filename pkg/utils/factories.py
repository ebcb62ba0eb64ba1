"""
Builders for random diagrams, graphs and small datasets used across the tests.
"""
import itertools
from typing import Optional

import numpy as np

from diagrams.models import DiagramDataset, DiagramPoint, ExtType, Label, PersistenceDiagram
from persistence.models import Graph


def random_diagram(
    rng: np.random.Generator, n_points: int, max_hom_dim: int = 1, label: Label = None
) -> PersistenceDiagram:
    births = rng.uniform(0.0, 1.0, n_points)
    lifetimes = rng.uniform(0.05, 1.0, n_points)
    dims = rng.integers(0, max_hom_dim + 1, n_points)
    return PersistenceDiagram(
        tuple(
            DiagramPoint(float(b), float(b + l), int(d), ExtType.NONE)
            for b, l, d in zip(births, lifetimes, dims)
        ),
        label,
    )


def grid_diagram(rng: np.random.Generator, n_points: int, n_dims: int = 2) -> PersistenceDiagram:
    """
    Points on the half-integer grid, so every matching cost and every sum of
    first or second powers is exact in float64.
    """
    births = rng.integers(0, 8, n_points) / 2.0
    lifetimes = rng.integers(1, 8, n_points) / 2.0
    dims = rng.integers(0, n_dims, n_points)
    return PersistenceDiagram(
        tuple(
            DiagramPoint(float(b), float(b + l), int(d), ExtType.NONE)
            for b, l, d in zip(births, lifetimes, dims)
        )
    )


def random_graph(rng: np.random.Generator, n_nodes: int, edge_probability: float = 0.3) -> Graph:
    edges = frozenset(
        (u, v) for u, v in itertools.combinations(range(n_nodes), 2) if rng.random() < edge_probability
    )
    return Graph(n_nodes, edges)


def separable_dataset(
    rng: np.random.Generator, n_items: int = 40, task: str = "orbit_classify", split: Optional[dict] = None
) -> DiagramDataset:
    """
    Two classes told apart by lifetimes: class 0 has short-lived points and
    class 1 long-lived ones. Every fourth item is in the test split.
    """
    diagrams = []
    for index in range(n_items):
        label = index % 2
        n = int(rng.integers(3, 8))
        births = rng.uniform(0.0, 0.5, n)
        lifetimes = rng.uniform(0.02, 0.1, n) if label == 0 else rng.uniform(0.6, 1.0, n)
        diagrams.append(
            PersistenceDiagram(
                tuple(DiagramPoint(float(b), float(b + l), 1, ExtType.NONE) for b, l in zip(births, lifetimes)),
                label,
            )
        )
    if split is None:
        test = [i for i in range(n_items) if i % 4 == 3]
        split = {"train": [i for i in range(n_items) if i % 4 != 3], "test": test}
    metadata = {"task": task, "max_hom_dim": 1, "use_ext_types": False, "n_classes": 2, "seed": 0}
    return DiagramDataset(tuple(diagrams), split, metadata)
