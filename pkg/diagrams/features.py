"""
Featurization of diagrams into fixed-width vectors and batch padding.
"""
from typing import Sequence, Tuple

import numpy as np

from .exceptions import DimOutOfRange, EmptyBatch, FeatureWidthMismatch
from .models import EXT_TYPE_ORDER, ExtType, FeaturizedDiagram, PersistenceDiagram


def feature_width(max_hom_dim: int, use_ext_types: bool) -> int:
    return 2 + (len(EXT_TYPE_ORDER) if use_ext_types else max_hom_dim + 1)


def featurize(
    diagram: PersistenceDiagram, max_hom_dim: int = 1, use_ext_types: bool = False
) -> FeaturizedDiagram:
    """Turn every point into [birth, death, one-hot] with a one-hot over dims or ext types."""
    width = feature_width(max_hom_dim, use_ext_types)
    vectors = np.zeros((len(diagram), width), dtype=np.float64)
    for row, point in enumerate(diagram.points):
        vectors[row, 0] = point.birth
        vectors[row, 1] = point.death
        if use_ext_types:
            if point.ext_type is ExtType.NONE:
                raise DimOutOfRange(
                    f"Point {row} has no extended type but extended featurization was requested"
                )
            vectors[row, 2 + EXT_TYPE_ORDER.index(point.ext_type)] = 1.0
        else:
            if point.hom_dim > max_hom_dim:
                raise DimOutOfRange(
                    f"Point {row} has hom_dim {point.hom_dim} > max_hom_dim {max_hom_dim}"
                )
            vectors[row, 2 + point.hom_dim] = 1.0
    return FeaturizedDiagram(vectors=vectors, mask=np.ones(len(diagram), dtype=np.float64))


def pad_batch(batch: Sequence[FeaturizedDiagram]) -> Tuple[np.ndarray, np.ndarray]:
    """Stack diagrams into [B, N_max, F] features and a [B, N_max] live-point mask."""
    if not batch:
        raise EmptyBatch("Cannot pad an empty batch")
    widths = {item.width for item in batch}
    if len(widths) != 1:
        raise FeatureWidthMismatch(f"Batch mixes feature widths {sorted(widths)}")
    width = widths.pop()
    n_max = max(len(item) for item in batch)
    features = np.zeros((len(batch), n_max, width), dtype=np.float64)
    mask = np.zeros((len(batch), n_max), dtype=np.float64)
    for row, item in enumerate(batch):
        size = len(item)
        features[row, :size] = item.vectors
        mask[row, :size] = item.mask
    return features, mask
