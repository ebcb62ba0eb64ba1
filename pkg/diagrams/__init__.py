"""
Persistence diagram data model, featurization and exact diagram distances.
"""
from .features import feature_width, featurize, pad_batch
from .matching import (
    bottleneck_distance,
    diagonal_projection,
    diagonal_wasserstein_p,
    matching_cost,
    wasserstein_matching,
    wasserstein_p,
)
from .models import (
    EXT_TYPE_ORDER,
    DiagramDataset,
    DiagramPoint,
    ExtType,
    FeaturizedDiagram,
    MatchingResult,
    PersistenceDiagram,
)

__all__ = [
    "EXT_TYPE_ORDER",
    "DiagramDataset",
    "DiagramPoint",
    "ExtType",
    "FeaturizedDiagram",
    "MatchingResult",
    "PersistenceDiagram",
    "bottleneck_distance",
    "diagonal_projection",
    "diagonal_wasserstein_p",
    "feature_width",
    "featurize",
    "matching_cost",
    "pad_batch",
    "wasserstein_matching",
    "wasserstein_p",
]
