"""
Services for turning raw inputs into persistence diagrams.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from config import settings
from diagrams.models import Label, PersistenceDiagram

from .alpha import alpha_filtration
from .graphs import extended_persistence_graph, hks
from .models import Graph
from .reduction import reduce_boundary_matrix
from .rips import vietoris_rips_h1

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class PersistenceService:
    """Service for computing the diagrams consumed by the network."""

    @staticmethod
    def alpha_diagram(points, label: Label = None, dims: Sequence[int] = (0, 1)) -> PersistenceDiagram:
        """
        Alpha-filtration diagram of a planar point cloud.

        Coincident points are merged first (orbits can revisit a point exactly).
        Essential classes are dropped, so only finite points remain.

        Args:
            points: array-like of shape [n, 2]
            label: target stored on the diagram
            dims: homology dimensions to keep

        Returns:
            PersistenceDiagram with ordinary points
        """
        array = np.asarray(points, dtype=np.float64)
        if array.ndim == 2 and len(array):
            _, first = np.unique(array, axis=0, return_index=True)
            if len(first) < len(array):
                logger.warning(
                    f"Merged {len(array) - len(first)} duplicate points before triangulation"
                )
                array = array[np.sort(first)]
        pairs = reduce_boundary_matrix(alpha_filtration(array))
        return pairs.to_diagram(dims=dims, label=label)

    @staticmethod
    def rips_diagram(
        dist,
        max_scale: Optional[float] = None,
        label: Label = None,
        dims: Sequence[int] = (1,),
    ) -> PersistenceDiagram:
        """Rips diagram of a distance matrix; classes alive at max_scale are dropped."""
        scale = settings.rips_max_scale if max_scale is None else max_scale
        pairs = vietoris_rips_h1(dist, max_scale=scale)
        return pairs.to_diagram(dims=dims, label=label)

    @staticmethod
    def hks_extended_diagram(
        graph: Graph, t: Optional[float] = None, label: Label = None
    ) -> PersistenceDiagram:
        """Extended persistence of a graph filtered by its heat kernel signature."""
        time = settings.hks_time if t is None else t
        return extended_persistence_graph(graph, hks(graph, time), label=label)

    @staticmethod
    def map_parallel(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
        """
        Apply fn to every item, in worker processes when jobs > 1.

        Results keep input order, so output does not depend on the worker count.
        """
        items = list(items)
        if jobs <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        workers = min(jobs, len(items))
        chunksize = max(1, math.ceil(len(items) / (4 * workers)))
        logger.info(f"Computing {len(items)} items on {workers} worker processes")
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(fn, items, chunksize=chunksize))
