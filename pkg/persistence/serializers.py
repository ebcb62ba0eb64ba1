"""
CSV formats for point clouds and distance matrices, and a JSON graph format.
"""
import json
import logging
import os
from pathlib import Path
from typing import Union

import numpy as np

from .exceptions import DegenerateInput, InvalidGraph, NotAMetricGuard
from .models import Graph

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

POINT_CLOUD_HEADER = "x,y"


def write_point_cloud(points, path: PathLike) -> None:
    array = np.asarray(points, dtype=np.float64)
    np.savetxt(path, array, fmt="%.17g", delimiter=",", header=POINT_CLOUD_HEADER, comments="")


def read_point_cloud(path: PathLike) -> np.ndarray:
    path = Path(path)
    with path.open() as handle:
        header = handle.readline().strip()
    if header != POINT_CLOUD_HEADER:
        raise DegenerateInput(f"{path}: expected header {POINT_CLOUD_HEADER!r}, got {header!r}")
    try:
        array = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise DegenerateInput(f"{path}: {exc}") from exc
    if array.size == 0:
        return np.zeros((0, 2))
    return array


def write_distance_matrix(matrix, path: PathLike) -> None:
    np.savetxt(path, np.asarray(matrix, dtype=np.float64), fmt="%.17g", delimiter=",")


def read_distance_matrix(path: PathLike) -> np.ndarray:
    try:
        matrix = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise NotAMetricGuard(f"{path}: {exc}") from exc
    if matrix.shape[0] != matrix.shape[1]:
        raise NotAMetricGuard(f"{path}: distance matrix must be square, got {matrix.shape}")
    return matrix


def write_graph(graph: Graph, path: PathLike) -> None:
    """Graph as JSON: {"n_nodes": n, "edges": [[u, v], ...]} with sorted edges."""
    document = {"n_nodes": graph.n_nodes, "edges": [list(edge) for edge in graph.sorted_edges()]}
    Path(path).write_text(json.dumps(document) + "\n")


def read_graph(path: PathLike) -> Graph:
    path = Path(path)
    try:
        document = json.loads(path.read_text())
        return Graph(int(document["n_nodes"]), frozenset(tuple(edge) for edge in document.get("edges", [])))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InvalidGraph(f"{path}: not a graph document ({exc})") from exc
