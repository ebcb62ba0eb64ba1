"""
Turning an ExperimentConfig into a dataset and a model configuration.
"""
import logging
from typing import Tuple

from datagen.mutag import load_mutag
from datagen.services import DataGenService
from diagrams.models import DiagramDataset
from diagrams.serializers import read_dataset
from persformer.models import PersformerConfig

from .models import ExperimentConfig, ExperimentTask

logger = logging.getLogger(__name__)


def prepare_dataset(config: ExperimentConfig, seed: int, jobs: int = 1) -> DiagramDataset:
    """Read dataset.path when given, otherwise build the task's dataset from its parameters."""
    params = config.dataset
    if params.path is not None:
        logger.info(f"Reading dataset from {params.path}")
        return read_dataset(params.path)
    if config.task is ExperimentTask.MUTAG_CLASSIFY:
        return DataGenService.graph_dataset(load_mutag(params.mutag_dir), seed, t=params.hks_time, jobs=jobs)
    if config.task is ExperimentTask.CURVATURE_REGRESS:
        return DataGenService.curvature_dataset(
            params.n_clouds,
            params.n_points,
            seed,
            curvature_range=params.curvature_range,
            max_scale=params.max_scale,
            jobs=jobs,
        )
    return DataGenService.orbit_dataset(
        params.per_class, params.n_points, seed, jobs=jobs, precision=params.precision, rhos=params.rhos
    )


def prepare(config: ExperimentConfig, seed: int, jobs: int = 1) -> Tuple[DiagramDataset, PersformerConfig]:
    dataset = prepare_dataset(config, seed, jobs)
    n_classes = int(dataset.metadata.get("n_classes") or 0) or None
    return dataset, config.network(n_classes)
