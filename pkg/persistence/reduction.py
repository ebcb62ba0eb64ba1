"""
Boundary matrix reduction over Z/2.

Columns are stored sparsely as sets of row indices. Dimensions are processed
from the top down so that every pivot found in dimension k clears the column
of the same index in dimension k-1 (the twist optimization).
"""
import logging
from collections import defaultdict
from typing import List, Sequence, Tuple

from .models import Filtration, PersistencePair, PersistencePairs

logger = logging.getLogger(__name__)


def reduce_columns(
    boundaries: Sequence[Sequence[int]], dims: Sequence[int]
) -> Tuple[List[Tuple[int, int]], List[int]]:
    """
    Reduce a boundary matrix given column by column in filtration order.

    Returns:
        (birth_index, death_index) pairs sorted by birth, and the indices of
        unpaired (essential) columns.
    """
    by_dim = defaultdict(list)
    for index, dim in enumerate(dims):
        by_dim[dim].append(index)

    pivot_owner = {}
    reduced = {}
    cleared = set()
    for dim in sorted(by_dim, reverse=True):
        if dim == 0:
            continue
        for column_index in by_dim[dim]:
            if column_index in cleared:
                continue
            column = set(boundaries[column_index])
            while column:
                low = max(column)
                owner = pivot_owner.get(low)
                if owner is None:
                    pivot_owner[low] = column_index
                    reduced[column_index] = column
                    cleared.add(low)
                    break
                column ^= reduced[owner]

    pairs = sorted(pivot_owner.items())
    paired = set(pivot_owner) | set(pivot_owner.values())
    unpaired = [index for index in range(len(dims)) if index not in paired]
    return pairs, unpaired


def reduce_boundary_matrix(filtration: Filtration, drop_zero: bool = True) -> PersistencePairs:
    """Persistence pairs in dimensions 0 and 1 of a validated filtration."""
    filtration.validate()
    index = filtration.index_map()
    simplices = filtration.simplices
    boundaries = [[index[face] for face in simplex.faces()] for simplex in simplices]
    dims = [simplex.dim for simplex in simplices]
    values = [simplex.filtration_value for simplex in simplices]

    pairs, unpaired = reduce_columns(boundaries, dims)
    result = []
    dropped = 0
    for birth, death in pairs:
        if dims[birth] > 1:
            continue
        if drop_zero and values[birth] == values[death]:
            dropped += 1
            continue
        result.append(PersistencePair(values[birth], values[death], dims[birth]))
    for birth in unpaired:
        if dims[birth] <= 1:
            result.append(PersistencePair(values[birth], float("inf"), dims[birth]))

    logger.debug(
        f"Reduced {len(simplices)} columns: {len(result)} pairs kept, {dropped} zero-persistence dropped"
    )
    return PersistencePairs(tuple(result))
