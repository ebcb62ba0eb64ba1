"""
Exact p-Wasserstein and diagonal p-Wasserstein distances between diagrams.

Finite orders are solved as a linear assignment problem on per-edge costs raised
to the p-th power; the infinite order is solved by binary search over the
candidate edge costs with a perfect-matching feasibility test. Points only match
points carrying the same (homology dimension, extended type) key.
"""
import logging
import math
from collections import Counter
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .exceptions import InfiniteDeath, InvalidP, SizeMismatch
from .models import MatchingResult, PersistenceDiagram

logger = logging.getLogger(__name__)


def diagonal_projection(pt: Sequence[float]) -> Tuple[float, float]:
    """Orthogonal projection of a point onto the diagonal."""
    mid = (float(pt[0]) + float(pt[1])) / 2.0
    return (mid, mid)


def point_distance(z: Sequence[float], w: Sequence[float]) -> float:
    """Sup-norm distance between two diagram points."""
    return max(abs(z[0] - w[0]), abs(z[1] - w[1]))


def diagonal_distance(z: Sequence[float]) -> float:
    """Sup-norm distance from a point to its diagonal projection."""
    return abs(z[1] - z[0]) / 2.0


def p_norm(costs: Iterable[float], p: float) -> float:
    """p-norm of a cost vector; summation is exactly rounded so order never matters."""
    values = [float(c) for c in costs]
    if not values:
        return 0.0
    largest = max(values)
    if math.isinf(p) or largest == 0.0 or math.isinf(largest):
        return largest
    # Terms are scaled so the largest is exactly 1.
    return largest * math.fsum((c / largest) ** p for c in values) ** (1.0 / p)


def _check_p(p: float) -> float:
    p = float(p)
    if not p >= 1.0:
        raise InvalidP(f"Wasserstein order must satisfy p >= 1, got {p}")
    return p


def _check_finite(diagram: PersistenceDiagram, name: str) -> None:
    if diagram.has_infinite_points():
        raise InfiniteDeath(
            f"Diagram {name} has points with infinite death; truncate or drop them first"
        )


def _key_codes(first: PersistenceDiagram, second: PersistenceDiagram):
    codes = {}
    a = np.array([codes.setdefault(k, len(codes)) for k in first.keys()], dtype=np.int64)
    b = np.array([codes.setdefault(k, len(codes)) for k in second.keys()], dtype=np.int64)
    return a, b


def _cross_costs(first: PersistenceDiagram, second: PersistenceDiagram) -> np.ndarray:
    """Sup-norm cost between every pair of points; +inf across different keys."""
    a = first.coordinates()
    b = second.coordinates()
    costs = np.maximum(
        np.abs(a[:, None, 0] - b[None, :, 0]),
        np.abs(a[:, None, 1] - b[None, :, 1]),
    )
    key_a, key_b = _key_codes(first, second)
    costs[key_a[:, None] != key_b[None, :]] = np.inf
    return costs


def _diagonal_costs(diagram: PersistenceDiagram) -> np.ndarray:
    coords = diagram.coordinates()
    return np.abs(coords[:, 1] - coords[:, 0]) / 2.0


def _solve_assignment(cost: np.ndarray, p: float):
    """Optimal perfect matching on a square cost matrix with forbidden (+inf) entries."""
    if cost.shape[0] == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    if math.isinf(p):
        return _solve_bottleneck(cost)
    finite = np.isfinite(cost)
    scale = cost[finite].max(initial=0.0)
    if scale == 0.0:
        weights = np.where(finite, 0.0, np.inf)
    else:
        weights = np.where(finite, (cost / scale) ** p, np.inf)
    return linear_sum_assignment(weights)


def _perfect_matching(adjacency: np.ndarray):
    graph = csr_matrix(adjacency.astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if np.any(match < 0):
        return None
    return np.arange(adjacency.shape[0]), np.asarray(match, dtype=np.int64)


def _solve_bottleneck(cost: np.ndarray):
    """Binary search for the smallest edge cost admitting a perfect matching."""
    candidates = np.unique(cost[np.isfinite(cost)])
    lo, hi = 0, len(candidates) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        found = _perfect_matching(cost <= candidates[mid])
        if found is None:
            lo = mid + 1
        else:
            best = found
            hi = mid - 1
    if best is None:
        raise ValueError("cost matrix is infeasible")
    return best


def matching_cost(
    first: PersistenceDiagram,
    second: PersistenceDiagram,
    pairs: Iterable[Tuple[int, int]],
    unmatched_first: Iterable[int],
    unmatched_second: Iterable[int],
    p: float,
) -> float:
    """Recompute the p-norm of the cost vector of a given partial matching."""
    a = first.coordinates()
    b = second.coordinates()
    costs = [point_distance(a[i], b[j]) for i, j in pairs]
    costs.extend(diagonal_distance(a[i]) for i in unmatched_first)
    costs.extend(diagonal_distance(b[j]) for j in unmatched_second)
    return p_norm(costs, p)


def wasserstein_matching(
    first: PersistenceDiagram, second: PersistenceDiagram, p: float
) -> MatchingResult:
    """Optimal full bijection between equal-size diagrams."""
    p = _check_p(p)
    if len(first) != len(second):
        raise SizeMismatch(
            f"Wasserstein distance needs equal sizes, got {len(first)} and {len(second)}"
        )
    _check_finite(first, "first")
    _check_finite(second, "second")
    if Counter(first.keys()) != Counter(second.keys()):
        logger.debug("Diagrams differ in per-dimension counts; no admissible bijection")
        return MatchingResult(math.inf, p=p)

    cost = _cross_costs(first, second)
    rows, cols = _solve_assignment(cost, p)
    pairs = tuple(sorted((int(r), int(c)) for r, c in zip(rows, cols)))
    return MatchingResult(
        cost=p_norm((cost[r, c] for r, c in pairs), p),
        pairs=pairs,
        p=p,
    )


def wasserstein_p(first: PersistenceDiagram, second: PersistenceDiagram, p: float) -> float:
    """p-Wasserstein distance over full bijections."""
    return wasserstein_matching(first, second, p).cost


def diagonal_wasserstein_p(
    first: PersistenceDiagram, second: PersistenceDiagram, p: float
) -> MatchingResult:
    """Diagonal p-Wasserstein distance: unmatched points pay their distance to the diagonal."""
    p = _check_p(p)
    _check_finite(first, "first")
    _check_finite(second, "second")
    m, n = len(first), len(second)
    if m + n == 0:
        return MatchingResult(0.0, p=p)

    diag_a = _diagonal_costs(first)
    diag_b = _diagonal_costs(second)
    cost = np.full((m + n, m + n), np.inf)
    cost[:m, :n] = _cross_costs(first, second)
    cost[np.arange(m), n + np.arange(m)] = diag_a
    cost[m + np.arange(n), np.arange(n)] = diag_b
    cost[m:, n:] = 0.0

    rows, cols = _solve_assignment(cost, p)
    pairs, unmatched_a, unmatched_b, costs = [], [], [], []
    for r, c in zip(rows.tolist(), cols.tolist()):
        if r < m and c < n:
            pairs.append((r, c))
            costs.append(cost[r, c])
        elif r < m:
            unmatched_a.append(r)
            costs.append(diag_a[r])
        elif c < n:
            unmatched_b.append(c)
            costs.append(diag_b[c])

    return MatchingResult(
        cost=p_norm(costs, p),
        pairs=tuple(sorted(pairs)),
        unmatched_first=tuple(sorted(unmatched_a)),
        unmatched_second=tuple(sorted(unmatched_b)),
        p=p,
    )


def bottleneck_distance(first: PersistenceDiagram, second: PersistenceDiagram) -> float:
    return diagonal_wasserstein_p(first, second, math.inf).cost
