"""
Plot-ready CSV exports of saliency scores, bin profiles and percentile sweeps.
"""
import csv
import logging
from pathlib import Path
from typing import Dict, Mapping, Union

from diagrams.models import PersistenceDiagram

from .exceptions import Misalignment
from .models import BinProfile, SaliencyScores

logger = logging.getLogger(__name__)

SALIENCY_HEADER = ["diagram_id", "point_idx", "birth", "death", "hom_dim", "score"]
PROFILE_HEADER = ["bin", "max_mean", "sum_mean"]
SWEEP_HEADER = ["percentile", "accuracy"]

PathLike = Union[str, Path]


def _writer(path: Path, header):
    path.parent.mkdir(parents=True, exist_ok=True)
    handle = path.open("w", newline="")
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    return handle, writer


def write_saliency(
    diagrams: Mapping[int, PersistenceDiagram],
    scores: Mapping[int, SaliencyScores],
    path: PathLike,
) -> None:
    """One row per diagram point, diagrams in ascending id order."""
    handle, writer = _writer(Path(path), SALIENCY_HEADER)
    with handle:
        for diagram_id in sorted(scores):
            diagram, values = diagrams[diagram_id], scores[diagram_id]
            if len(values) != len(diagram):
                raise Misalignment(f"Diagram {diagram_id}: {len(values)} scores for {len(diagram)} points")
            for index, (point, score) in enumerate(zip(diagram.points, values.scores)):
                writer.writerow(
                    [diagram_id, index, repr(point.birth), repr(point.death), point.hom_dim, repr(float(score))]
                )
    logger.info(f"Saliency of {len(scores)} diagrams written to {path}")


def read_saliency(path: PathLike) -> Dict[int, SaliencyScores]:
    collected: Dict[int, list] = {}
    with Path(path).open(newline="") as handle:
        for row in csv.DictReader(handle):
            collected.setdefault(int(row["diagram_id"]), []).append(float(row["score"]))
    return {key: SaliencyScores(values) for key, values in collected.items()}


def write_bin_profile(profile: BinProfile, path: PathLike) -> None:
    handle, writer = _writer(Path(path), PROFILE_HEADER)
    with handle:
        for index in range(profile.n_bins):
            writer.writerow([index, repr(float(profile.max_mean[index])), repr(float(profile.sum_mean[index]))])


def write_sweep(results: Mapping[float, float], path: PathLike) -> None:
    handle, writer = _writer(Path(path), SWEEP_HEADER)
    with handle:
        for percentile in sorted(results):
            writer.writerow([repr(float(percentile)), repr(float(results[percentile]))])
