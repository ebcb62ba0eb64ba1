"""
Heat kernel signature and extended persistence of node-filtered graphs.
"""
import logging
from typing import List, Sequence, Tuple

import numpy as np

from diagrams.models import DiagramPoint, ExtType, Label, PersistenceDiagram

from .exceptions import InvalidGraph, NonPositiveT
from .models import Graph
from .reduction import reduce_columns

logger = logging.getLogger(__name__)


def normalized_laplacian(graph: Graph) -> np.ndarray:
    """L = I - D^-1/2 A D^-1/2; isolated nodes get identity rows."""
    adjacency = graph.adjacency()
    degree = adjacency.sum(axis=1)
    inv_sqrt = np.zeros_like(degree)
    positive = degree > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(degree[positive])
    return np.eye(graph.n_nodes) - inv_sqrt[:, None] * adjacency * inv_sqrt[None, :]


def laplacian_spectrum(graph: Graph) -> Tuple[np.ndarray, np.ndarray]:
    eigenvalues, eigenvectors = np.linalg.eigh(normalized_laplacian(graph))
    return eigenvalues, eigenvectors


def hks(graph: Graph, t: float) -> np.ndarray:
    """Heat kernel signature sum_k exp(-t lambda_k) phi_k(v)^2 for every node v."""
    if not t > 0:
        raise NonPositiveT(f"Diffusion time must be positive, got {t}")
    if graph.n_nodes == 0:
        return np.zeros(0)
    eigenvalues, eigenvectors = laplacian_spectrum(graph)
    return (eigenvectors ** 2) @ np.exp(-t * eigenvalues)


def _ext_type(birth_ascending: bool, death_ascending: bool, dim: int) -> ExtType:
    if birth_ascending and death_ascending:
        return ExtType.ORDINARY
    if not birth_ascending:
        return ExtType.RELATIVE
    return ExtType.EXTENDED_PLUS if dim == 0 else ExtType.EXTENDED_MINUS


def extended_persistence_graph(
    graph: Graph,
    values: Sequence[float],
    label: Label = None,
    keep_zero_persistence: bool = False,
) -> PersistenceDiagram:
    """
    Extended persistence of a graph filtered by node values.

    The ascending pass adds nodes at their value and edges at the larger endpoint
    value. The descending pass cones every cell off to an apex, adding apex-node
    edges at the node value and apex-edge triangles at the smaller endpoint value,
    from the top value down. One reduction of the combined boundary matrix yields
    all four point types. Extended points are always kept; ordinary and relative
    points of zero persistence are dropped unless requested.
    """
    f = np.asarray(values, dtype=np.float64)
    if f.shape != (graph.n_nodes,):
        raise InvalidGraph(f"Expected {graph.n_nodes} node values, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise InvalidGraph("Node values must be finite")

    edges = graph.sorted_edges()
    ascending = [(float(f[v]), 0, (v,)) for v in range(graph.n_nodes)]
    ascending += [(max(float(f[u]), float(f[v])), 1, (u, v)) for u, v in edges]
    ascending.sort()
    descending = [(float(f[v]), 1, (v,)) for v in range(graph.n_nodes)]
    descending += [(min(float(f[u]), float(f[v])), 2, (u, v)) for u, v in edges]
    descending.sort(key=lambda cell: (-cell[0], cell[1], cell[2]))

    # index 0 is the cone apex
    cell_values: List[float] = [0.0]
    dims: List[int] = [0]
    is_ascending: List[bool] = [True]
    boundaries: List[List[int]] = [[]]
    position = {}
    cone_position = {}
    for value, dim, vertices in ascending:
        position[vertices] = len(dims)
        boundaries.append([] if dim == 0 else [position[(vertices[0],)], position[(vertices[1],)]])
        cell_values.append(value)
        dims.append(dim)
        is_ascending.append(True)
    for value, dim, vertices in descending:
        cone_position[vertices] = len(dims)
        if dim == 1:
            boundaries.append([0, position[vertices]])
        else:
            u, v = vertices
            boundaries.append([position[vertices], cone_position[(u,)], cone_position[(v,)]])
        cell_values.append(value)
        dims.append(dim)
        is_ascending.append(False)

    pairs, _ = reduce_columns(boundaries, dims)
    points = []
    for birth, death in pairs:
        kind = _ext_type(is_ascending[birth], is_ascending[death], dims[birth])
        birth_value, death_value = cell_values[birth], cell_values[death]
        if (
            not keep_zero_persistence
            and kind in (ExtType.ORDINARY, ExtType.RELATIVE)
            and birth_value == death_value
        ):
            continue
        points.append(DiagramPoint(birth_value, death_value, dims[birth], kind))

    logger.debug(
        f"Extended persistence on {graph.n_nodes} nodes and {len(edges)} edges: {len(points)} points"
    )
    return PersistenceDiagram(tuple(points), label)
