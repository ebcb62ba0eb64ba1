"""
Delaunay triangulation and alpha-complex filtration of planar point sets.

Filtration values are radii, not squared radii.
"""
import logging
from collections import defaultdict
from typing import List, Sequence, Tuple

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .exceptions import DegenerateInput, DuplicatePoints
from .models import Filtration, Simplex

logger = logging.getLogger(__name__)

Triangle = Tuple[int, int, int]


def _as_planar_points(points: Sequence[Sequence[float]]) -> np.ndarray:
    array = np.asarray(points, dtype=np.float64)
    if array.ndim != 2 or array.shape[1] != 2:
        raise DegenerateInput(f"Expected an [n, 2] point array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise DegenerateInput("Point coordinates must be finite")
    return array


def delaunay_2d(points: Sequence[Sequence[float]]) -> List[Triangle]:
    """Delaunay triangles as sorted vertex triples, in sorted order."""
    array = _as_planar_points(points)
    if len(array) < 3:
        raise DegenerateInput(f"Need at least 3 points for a triangulation, got {len(array)}")
    if len(np.unique(array, axis=0)) < len(array):
        raise DuplicatePoints("Point set contains duplicate points")
    singular = np.linalg.svd(array - array.mean(axis=0), compute_uv=False)
    if singular[1] <= 1e-12 * max(singular[0], 1e-300):
        raise DegenerateInput("All points are collinear")

    try:
        triangulation = Delaunay(array)
    except QhullError as exc:
        raise DegenerateInput(f"Triangulation failed: {exc}") from exc
    if len(triangulation.coplanar):
        raise DuplicatePoints(
            f"{len(triangulation.coplanar)} points are numerically coincident with others"
        )
    return sorted(tuple(sorted(int(v) for v in simplex)) for simplex in triangulation.simplices)


def circumradius(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    ab = np.linalg.norm(b - a)
    bc = np.linalg.norm(c - b)
    ca = np.linalg.norm(a - c)
    twice_area = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    if twice_area == 0.0:
        return float("inf")
    return float(ab * bc * ca / (2.0 * twice_area))


def _small_filtration(array: np.ndarray) -> Filtration:
    """One or two points: the vertices, and their edge at half the distance."""
    simplices = [Simplex((v,), 0.0) for v in range(len(array))]
    if len(array) == 2:
        half_length = float(np.linalg.norm(array[1] - array[0]) / 2.0)
        if half_length == 0.0:
            raise DuplicatePoints("Point set contains duplicate points")
        simplices.append(Simplex((0, 1), half_length))
    return Filtration.from_simplices(simplices)


def alpha_filtration(points: Sequence[Sequence[float]]) -> Filtration:
    """
    Alpha filtration: vertices at 0, triangles at their circumradius, edges at half
    their length when Gabriel, otherwise at the smallest adjacent circumradius.
    """
    array = _as_planar_points(points)
    if len(array) < 3:
        return _small_filtration(array)
    triangles = delaunay_2d(array)

    radii = {}
    cofaces = defaultdict(list)
    for triangle in triangles:
        radius = circumradius(*array[list(triangle)])
        radii[triangle] = radius
        i, j, k = triangle
        cofaces[(i, j)].append((k, radius))
        cofaces[(i, k)].append((j, radius))
        cofaces[(j, k)].append((i, radius))

    edge_values = {}
    for (u, v), adjacent in cofaces.items():
        midpoint = (array[u] + array[v]) / 2.0
        half_length = float(np.linalg.norm(array[u] - array[v]) / 2.0)
        gabriel = all(
            float(np.sum((array[w] - midpoint) ** 2)) >= half_length ** 2 for w, _ in adjacent
        )
        edge_values[(u, v)] = half_length if gabriel else min(r for _, r in adjacent)

    simplices = [Simplex((v,), 0.0) for v in range(len(array))]
    simplices.extend(Simplex(edge, value) for edge, value in edge_values.items())
    for (i, j, k), radius in radii.items():
        # rounding can leave a right triangle a hair below its hypotenuse edge
        value = max(radius, edge_values[(i, j)], edge_values[(i, k)], edge_values[(j, k)])
        simplices.append(Simplex((i, j, k), value))

    logger.debug(f"Alpha filtration on {len(array)} points: {len(triangles)} triangles")
    return Filtration.from_simplices(simplices)
