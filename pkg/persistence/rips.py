"""
Vietoris-Rips persistence (dimensions 0 and 1) from a distance matrix.
"""
import logging
import math
from typing import Optional

import numpy as np

from config import settings

from .exceptions import NotAMetricGuard, TooLarge
from .models import Filtration, PersistencePairs, Simplex
from .reduction import reduce_boundary_matrix

logger = logging.getLogger(__name__)


def _validate_distances(dist, max_points: int) -> np.ndarray:
    matrix = np.asarray(dist, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotAMetricGuard(f"Distance matrix must be square, got shape {matrix.shape}")
    if matrix.shape[0] > max_points:
        raise TooLarge(f"{matrix.shape[0]} points exceed the clique enumeration guard of {max_points}")
    if not np.all(np.isfinite(matrix)):
        raise NotAMetricGuard("Distance matrix has non-finite entries")
    if np.any(matrix < 0):
        raise NotAMetricGuard("Distance matrix has negative entries")
    if np.any(np.diag(matrix) != 0):
        raise NotAMetricGuard("Distance matrix has a nonzero diagonal")
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12):
        raise NotAMetricGuard("Distance matrix is not symmetric")
    return matrix


def rips_filtration(dist: np.ndarray, max_scale: float = math.inf) -> Filtration:
    """Clique filtration up to dimension 2, truncated at max_scale."""
    n = dist.shape[0]
    adjacency = dist <= max_scale
    np.fill_diagonal(adjacency, False)

    simplices = [Simplex((v,), 0.0) for v in range(n)]
    rows, cols = np.nonzero(np.triu(adjacency, 1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        d_ij = float(dist[i, j])
        simplices.append(Simplex((i, j), d_ij))
        common = np.nonzero(adjacency[i] & adjacency[j])[0]
        for k in common[common > j].tolist():
            simplices.append(Simplex((i, j, k), max(d_ij, float(dist[i, k]), float(dist[j, k]))))

    return Filtration.from_simplices(simplices)


def vietoris_rips_h1(
    dist, max_scale: float = math.inf, max_points: Optional[int] = None
) -> PersistencePairs:
    """
    H0 and H1 pairs of the Rips filtration of a finite metric space.

    Args:
        dist: symmetric n x n distance matrix with zero diagonal
        max_scale: simplices with diameter above this value are left out
        max_points: size guard (default from settings)

    Raises:
        NotAMetricGuard: if the matrix is not a plausible metric
        TooLarge: if n exceeds the guard
    """
    matrix = _validate_distances(dist, max_points or settings.rips_max_points)
    filtration = rips_filtration(matrix, max_scale)
    logger.debug(
        f"Rips filtration on {matrix.shape[0]} points up to scale {max_scale}: {len(filtration)} simplices"
    )
    pairs = reduce_boundary_matrix(filtration)
    return PersistencePairs(tuple(p for p in pairs.pairs if p.dim <= 1))
