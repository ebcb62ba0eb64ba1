"""
Persistence computation: alpha and Rips filtrations, boundary reduction and
extended persistence of graphs.
"""
from .alpha import alpha_filtration, delaunay_2d
from .graphs import extended_persistence_graph, hks, laplacian_spectrum, normalized_laplacian
from .models import Filtration, Graph, PairKind, PersistencePair, PersistencePairs, Simplex
from .reduction import reduce_boundary_matrix, reduce_columns
from .rips import rips_filtration, vietoris_rips_h1
from .serializers import (
    read_distance_matrix,
    read_graph,
    read_point_cloud,
    write_distance_matrix,
    write_graph,
    write_point_cloud,
)
from .services import PersistenceService

__all__ = [
    "Filtration",
    "Graph",
    "PairKind",
    "PersistencePair",
    "PersistencePairs",
    "PersistenceService",
    "Simplex",
    "alpha_filtration",
    "delaunay_2d",
    "extended_persistence_graph",
    "hks",
    "laplacian_spectrum",
    "normalized_laplacian",
    "read_distance_matrix",
    "read_graph",
    "read_point_cloud",
    "reduce_boundary_matrix",
    "reduce_columns",
    "rips_filtration",
    "vietoris_rips_h1",
    "write_distance_matrix",
    "write_graph",
    "write_point_cloud",
]
