"""
Services for building labeled diagram datasets.
"""
import logging
import math
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.model_selection import train_test_split

from config import settings
from diagrams.models import DiagramDataset, PersistenceDiagram
from persistence.models import Graph
from persistence.services import PersistenceService

from .curvature import sample_constant_curvature_disc
from .models import ORBIT_RHOS, CurvatureSampleSpec, LabeledGraphSet, OrbitSpec, Precision
from .orbits import generate_orbit

logger = logging.getLogger(__name__)

TEST_FRACTION = 0.3


def item_seed(*entropy: int) -> int:
    """Independent 64-bit seed for one dataset item."""
    return int(np.random.SeedSequence(list(entropy)).generate_state(1, dtype=np.uint64)[0])


def split_indices(
    n_items: int, seed: int, stratify: Optional[Sequence] = None, test_size: float = TEST_FRACTION
) -> Dict[str, List[int]]:
    """
    Deterministic train/test split, stratified by label when labels are given.

    Stratification is skipped when a class has a single member or either side
    of the split would be smaller than the number of classes.
    """
    if stratify is not None:
        counts = Counter(stratify)
        n_test = math.ceil(test_size * n_items)
        if min(counts.values()) < 2 or min(n_test, n_items - n_test) < len(counts):
            logger.warning(f"Too few items ({n_items}) for a stratified split; splitting without labels")
            stratify = None
    train, test = train_test_split(
        np.arange(n_items),
        test_size=test_size,
        random_state=seed % 2 ** 32,
        shuffle=True,
        stratify=stratify,
    )
    return {"train": sorted(int(i) for i in train), "test": sorted(int(i) for i in test)}


def _orbit_diagram(job: Tuple[OrbitSpec, int]) -> PersistenceDiagram:
    spec, label = job
    return PersistenceService.alpha_diagram(generate_orbit(spec), label=label)


def _curvature_diagram(job: Tuple[CurvatureSampleSpec, float]) -> PersistenceDiagram:
    spec, max_scale = job
    dist = sample_constant_curvature_disc(spec)
    return PersistenceService.rips_diagram(dist, max_scale=max_scale, label=spec.curvature)


def _graph_diagram(job: Tuple[Graph, int, float]) -> PersistenceDiagram:
    graph, label, t = job
    return PersistenceService.hks_extended_diagram(graph, t=t, label=label)


class DataGenService:
    """Service for generating the orbit, curvature and graph datasets."""

    @staticmethod
    def orbit_dataset(
        per_class: int,
        n_points: int,
        seed: int,
        jobs: int = 1,
        precision: Precision = Precision.FLOAT64,
        rhos: Sequence[float] = ORBIT_RHOS,
    ) -> DiagramDataset:
        """
        per_class orbits for every rho, as alpha diagrams (H0 + H1) labeled by class index.

        Raises:
            ValueError: if per_class < 1
        """
        if per_class < 1:
            raise ValueError(f"per_class must be at least 1, got {per_class}")
        specs = [
            (
                OrbitSpec(rho=rho, n_points=n_points, seed=item_seed(seed, label, k), precision=precision),
                label,
            )
            for label, rho in enumerate(rhos)
            for k in range(per_class)
        ]
        logger.info(f"Generating {len(specs)} orbits of {n_points} points (seed={seed})")
        diagrams = PersistenceService.map_parallel(_orbit_diagram, specs, jobs)
        labels = [label for _, label in specs]
        metadata = {
            "task": "orbit_classify",
            "max_hom_dim": 1,
            "use_ext_types": False,
            "n_classes": len(rhos),
            "class_rhos": {str(label): rho for label, rho in enumerate(rhos)},
            "n_points": n_points,
            "per_class": per_class,
            "precision": Precision(precision).value,
            "seed": seed,
        }
        return DiagramDataset(tuple(diagrams), split_indices(len(specs), seed, labels), metadata)

    @staticmethod
    def curvature_dataset(
        n_clouds: int,
        n_points: int,
        seed: int,
        curvature_range: Tuple[float, float] = (-2.0, 1.0),
        max_scale: Optional[float] = None,
        jobs: int = 1,
    ) -> DiagramDataset:
        """Rips H1 diagrams of disc samples labeled by their curvature K ~ U(range)."""
        if n_clouds < 2:
            raise ValueError(f"Need at least 2 clouds for a train/test split, got {n_clouds}")
        scale = settings.rips_max_scale if max_scale is None else max_scale
        low, high = curvature_range
        curvatures = np.random.default_rng(seed).uniform(low, high, n_clouds)
        jobs_list = [
            (
                CurvatureSampleSpec(curvature=float(k), n_points=n_points, seed=item_seed(seed, 1, index)),
                scale,
            )
            for index, k in enumerate(curvatures)
        ]
        logger.info(f"Sampling {n_clouds} curvature discs of {n_points} points (seed={seed})")
        diagrams = PersistenceService.map_parallel(_curvature_diagram, jobs_list, jobs)
        empty = sum(1 for d in diagrams if len(d) == 0)
        if empty:
            logger.warning(f"{empty} curvature diagrams have no H1 points below scale {scale}")
        metadata = {
            "task": "curvature_regress",
            "max_hom_dim": 1,
            "use_ext_types": False,
            "n_classes": 0,
            "curvature_range": [low, high],
            "n_points": n_points,
            "max_scale": scale,
            "seed": seed,
        }
        return DiagramDataset(tuple(diagrams), split_indices(n_clouds, seed), metadata)

    @staticmethod
    def graph_dataset(
        graph_set: LabeledGraphSet, seed: int, t: Optional[float] = None, jobs: int = 1
    ) -> DiagramDataset:
        """HKS-filtered extended persistence diagrams of a labeled graph set."""
        time = settings.hks_time if t is None else t
        jobs_list = [(g, label, time) for g, label in zip(graph_set.graphs, graph_set.labels)]
        diagrams = PersistenceService.map_parallel(_graph_diagram, jobs_list, jobs)
        metadata = {
            "task": "mutag_classify",
            "max_hom_dim": 1,
            "use_ext_types": True,
            "n_classes": 2,
            "hks_time": time,
            "seed": seed,
        }
        split = split_indices(len(graph_set), seed, list(graph_set.labels))
        return DiagramDataset(tuple(diagrams), split, metadata)


def generate_orbit_dataset(per_class: int, n_points: int, seed: int, jobs: int = 1) -> DiagramDataset:
    return DataGenService.orbit_dataset(per_class, n_points, seed, jobs=jobs)
