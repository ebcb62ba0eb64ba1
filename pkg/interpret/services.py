"""
Saliency maps of trained models, saliency-guided filtering and bin profiles.

The saliency of point k is the Euclidean norm of the gradient of the model's
objective with respect to the input vector of point k. For classifiers the
objective is the log-probability of the predicted class (ties go to the lowest
class index); for single-output models it is the raw output.
"""
import logging
import math
from typing import Dict, List, Sequence

import numpy as np

from autodiff import ops
from autodiff.tensor import Tensor, backward
from diagrams.features import pad_batch
from diagrams.models import DiagramDataset, PersistenceDiagram
from persformer.network import Persformer
from training.models import Task
from training.services import TrainingService, featurize_diagrams

from .exceptions import InterpretError, InvalidPercentile, Misalignment
from .models import BinProfile, SaliencyScores, SaliencyTarget

logger = logging.getLogger(__name__)

DEFAULT_BINS = 10


def _check_percentile(q: float) -> None:
    if not 0.0 <= q < 100.0:
        raise InvalidPercentile(f"Percentile must lie in [0, 100), got {q}")


def _normalize(values: np.ndarray) -> np.ndarray:
    """Min/max rescaling to [0, 1]; a constant vector maps to zeros."""
    low, high = values.min(), values.max()
    if high == low:
        return np.zeros_like(values)
    return (values - low) / (high - low)


class InterpretService:
    """Service for explaining model predictions on diagrams."""

    @staticmethod
    def saliency_batch(
        model: Persformer,
        diagrams: Sequence[PersistenceDiagram],
        max_hom_dim: int = 1,
        use_ext_types: bool = False,
        wrt: SaliencyTarget = SaliencyTarget.FULL,
    ) -> List[SaliencyScores]:
        """Saliency of several diagrams in one forward/backward pass."""
        if not diagrams:
            return []
        if any(len(d) == 0 for d in diagrams):
            raise InterpretError("Saliency needs nonempty diagrams")
        items = featurize_diagrams(diagrams, max_hom_dim, use_ext_types)
        features, mask = pad_batch(items)
        inputs = Tensor(features, requires_grad=True)
        output = model.forward(inputs, mask, train=False)
        if output.shape[1] == 1:
            objective = ops.gather_last(output, np.zeros(len(diagrams), dtype=np.int64))
        else:
            log_probs = ops.log_softmax(output)
            objective = ops.gather_last(log_probs, np.argmax(log_probs.data, axis=1))
        model.state.zero_grad()
        backward(ops.total(objective))
        grads = inputs.grad
        model.state.zero_grad()
        if SaliencyTarget(wrt) is SaliencyTarget.BIRTH_DEATH:
            grads = grads[..., :2]
        norms = np.linalg.norm(grads, axis=-1)
        return [SaliencyScores(norms[row, :len(d)].copy()) for row, d in enumerate(diagrams)]

    @staticmethod
    def saliency(
        model: Persformer,
        diagram: PersistenceDiagram,
        max_hom_dim: int = 1,
        use_ext_types: bool = False,
        wrt: SaliencyTarget = SaliencyTarget.FULL,
    ) -> SaliencyScores:
        return InterpretService.saliency_batch(model, [diagram], max_hom_dim, use_ext_types, wrt)[0]

    @staticmethod
    def dataset_saliency(
        model: Persformer,
        dataset: DiagramDataset,
        indices: Sequence[int],
        batch_size: int = 32,
        wrt: SaliencyTarget = SaliencyTarget.FULL,
    ) -> Dict[int, SaliencyScores]:
        """Saliency for the chosen nonempty diagrams of a dataset, keyed by index."""
        meta = dataset.metadata
        max_hom_dim = int(meta.get("max_hom_dim", 1))
        use_ext_types = bool(meta.get("use_ext_types", False))
        chosen = [i for i in indices if len(dataset.diagrams[i])]
        skipped = len(indices) - len(chosen)
        if skipped:
            logger.warning(f"Skipped {skipped} empty diagrams")
        result = {}
        for start in range(0, len(chosen), batch_size):
            block = chosen[start:start + batch_size]
            scores = InterpretService.saliency_batch(
                model, [dataset.diagrams[i] for i in block], max_hom_dim, use_ext_types, wrt
            )
            result.update(zip(block, scores))
        return result

    @staticmethod
    def percentile_filter(
        diagram: PersistenceDiagram, scores: SaliencyScores, q: float
    ) -> PersistenceDiagram:
        """
        Keep the points scoring strictly above the nearest-rank q-th percentile.

        The threshold is the ceil(q/100 * N)-th smallest score (rank at least 1).
        When no point clears it, the first highest-scoring point is kept.
        """
        _check_percentile(q)
        values = np.asarray(scores.scores)
        if len(values) != len(diagram):
            raise Misalignment(f"{len(values)} scores for a diagram of {len(diagram)} points")
        if not len(values):
            return diagram
        rank = max(1, math.ceil(q * len(values) / 100.0))
        threshold = np.sort(values)[rank - 1]
        keep = np.flatnonzero(values > threshold)
        if not len(keep):
            keep = np.array([int(np.argmax(values))])
        return diagram.subset(keep.tolist())

    @staticmethod
    def saliency_bin_profile(
        diagrams: Sequence[PersistenceDiagram],
        scoress: Sequence[SaliencyScores],
        n_bins: int = DEFAULT_BINS,
    ) -> BinProfile:
        """
        Per lifetime bin, the max and the sum of normalized scores, averaged over diagrams.

        Lifetimes and scores are min/max normalized per diagram; a diagram whose
        lifetimes are all equal puts every point in bin 0. Empty bins count as 0.
        """
        if not diagrams:
            raise InterpretError("Bin profile needs at least one diagram")
        if len(diagrams) != len(scoress) or n_bins < 1:
            raise Misalignment(f"{len(diagrams)} diagrams but {len(scoress)} score vectors")
        max_total = np.zeros(n_bins)
        sum_total = np.zeros(n_bins)
        for diagram, scores in zip(diagrams, scoress):
            if len(scores) != len(diagram):
                raise Misalignment(f"{len(scores)} scores for a diagram of {len(diagram)} points")
            if not len(diagram):
                continue
            lifetimes = _normalize(np.array([p.lifetime for p in diagram.points]))
            normalized = _normalize(np.asarray(scores.scores))
            bins = np.minimum((lifetimes * n_bins).astype(np.int64), n_bins - 1)
            bin_max = np.zeros(n_bins)
            np.maximum.at(bin_max, bins, normalized)
            max_total += bin_max
            sum_total += np.bincount(bins, weights=normalized, minlength=n_bins)
        return BinProfile(max_mean=max_total / len(diagrams), sum_mean=sum_total / len(diagrams))

    @staticmethod
    def filter_dataset(
        model: Persformer, dataset: DiagramDataset, q: float, batch_size: int = 32
    ) -> DiagramDataset:
        """Every diagram filtered at the q-th saliency percentile; split kept."""
        _check_percentile(q)
        scores = InterpretService.dataset_saliency(model, dataset, range(len(dataset)), batch_size)
        filtered = [
            InterpretService.percentile_filter(d, scores[i], q) if i in scores else d
            for i, d in enumerate(dataset.diagrams)
        ]
        before = sum(len(d) for d in dataset.diagrams)
        after = sum(len(d) for d in filtered)
        logger.info(f"Filtering at percentile {q} kept {after} of {before} points")
        return dataset.replace_diagrams(filtered, saliency_percentile=q)

    @staticmethod
    def accuracy_under_filtering(
        model: Persformer,
        dataset: DiagramDataset,
        percentiles: Sequence[float],
        batch_size: int = 32,
    ) -> Dict[float, float]:
        """
        Test metric of a trained model on saliency-filtered test diagrams, without
        retraining, for every percentile. Percentile 0 filters only the minimum.
        """
        for q in percentiles:
            _check_percentile(q)
        test_idx = list(dataset.split.get("test", [])) or list(range(len(dataset)))
        scores = InterpretService.dataset_saliency(model, dataset, test_idx, batch_size)
        meta = dataset.metadata
        task = Task.REGRESSION if model.config.n_outputs == 1 else Task.CLASSIFICATION
        dtype = np.float64 if task is Task.REGRESSION else np.int64
        targets = np.asarray([dataset.diagrams[i].label for i in test_idx], dtype=dtype)
        results = {}
        for q in percentiles:
            filtered = [
                InterpretService.percentile_filter(dataset.diagrams[i], scores[i], q)
                if i in scores
                else dataset.diagrams[i]
                for i in test_idx
            ]
            items = featurize_diagrams(
                filtered, int(meta.get("max_hom_dim", 1)), bool(meta.get("use_ext_types", False))
            )
            _, metric = TrainingService.evaluate(model, items, targets, task, batch_size)
            results[float(q)] = metric
            logger.info(f"Percentile {q}: metric {metric:.4f}")
        return results


def saliency(
    model: Persformer,
    diagram: PersistenceDiagram,
    max_hom_dim: int = 1,
    use_ext_types: bool = False,
    wrt: SaliencyTarget = SaliencyTarget.FULL,
) -> SaliencyScores:
    return InterpretService.saliency(model, diagram, max_hom_dim, use_ext_types, wrt)


def percentile_filter(diagram: PersistenceDiagram, scores: SaliencyScores, q: float) -> PersistenceDiagram:
    return InterpretService.percentile_filter(diagram, scores, q)


def saliency_bin_profile(
    diagrams: Sequence[PersistenceDiagram],
    scoress: Sequence[SaliencyScores],
    n_bins: int = DEFAULT_BINS,
) -> BinProfile:
    return InterpretService.saliency_bin_profile(diagrams, scoress, n_bins)
