"""
Services for training, evaluating and cross-validating Persformer models.
"""
import logging
import math
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import r2_score
from sklearn.model_selection import KFold, StratifiedKFold

from autodiff import ops
from autodiff.tensor import backward
from diagrams.features import feature_width, featurize, pad_batch
from diagrams.models import DiagramDataset, FeaturizedDiagram, PersistenceDiagram
from persformer.models import ModelState, PersformerConfig
from persformer.network import Persformer

from .exceptions import InvalidLabels, TooFewItems, TrainingDiverged
from .models import AdamState, CrossValidationResult, OptimSpec, RunMetrics, Task, TrainResult
from .optim import adamw_step, clip_by_global_norm, lr_schedule

logger = logging.getLogger(__name__)


def featurize_diagrams(
    diagrams: Sequence[PersistenceDiagram], max_hom_dim: int = 1, use_ext_types: bool = False
) -> List[FeaturizedDiagram]:
    """
    Featurize every diagram. An empty diagram becomes a single all-zero live
    token (mask 1), the only live row allowed to be all zeros.
    """
    width = feature_width(max_hom_dim, use_ext_types)
    items = []
    for diagram in diagrams:
        if len(diagram) == 0:
            items.append(FeaturizedDiagram(np.zeros((1, width)), np.ones(1)))
        else:
            items.append(featurize(diagram, max_hom_dim, use_ext_types))
    return items


def featurize_dataset(dataset: DiagramDataset) -> List[FeaturizedDiagram]:
    meta = dataset.metadata
    return featurize_diagrams(
        dataset.diagrams, int(meta.get("max_hom_dim", 1)), bool(meta.get("use_ext_types", False))
    )


def _targets(dataset: DiagramDataset, task: Task, n_outputs: int) -> np.ndarray:
    labels = dataset.labels
    if any(label is None for label in labels):
        raise InvalidLabels("Every diagram needs a label for training")
    if task is Task.REGRESSION:
        if n_outputs != 1:
            raise InvalidLabels(f"Regression needs a single output, the model has {n_outputs}")
        values = np.asarray(labels, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise InvalidLabels("Regression targets must be finite")
        return values
    if any(float(label) != int(label) for label in labels):
        raise InvalidLabels("Class labels must be integers")
    values = np.asarray([int(label) for label in labels], dtype=np.int64)
    if values.min() < 0 or values.max() >= n_outputs:
        raise InvalidLabels(f"Class labels must lie in 0..{n_outputs - 1}")
    return values


def _loss(output, targets: np.ndarray, task: Task):
    if task is Task.CLASSIFICATION:
        return ops.cross_entropy_with_logits(output, targets)
    return ops.mse(output, targets.reshape(-1, 1))


def _score(outputs: np.ndarray, targets: np.ndarray, task: Task) -> float:
    if task is Task.CLASSIFICATION:
        return float(np.mean(np.argmax(outputs, axis=1) == targets))
    return float(r2_score(targets, outputs[:, 0]))


class TrainingService:
    """Service for fitting models on diagram datasets."""

    @staticmethod
    def evaluate(
        model: Persformer,
        items: Sequence[FeaturizedDiagram],
        targets: np.ndarray,
        task: Task,
        batch_size: int = 32,
    ) -> Tuple[float, float]:
        """Mean loss and accuracy (or R^2) in eval mode."""
        if not len(items):
            return float("nan"), float("nan")
        outputs, weighted = [], 0.0
        for start in range(0, len(items), batch_size):
            features, mask = pad_batch(items[start:start + batch_size])
            output = model.forward(features, mask, train=False)
            batch_targets = targets[start:start + batch_size]
            weighted += _loss(output, batch_targets, task).item() * len(batch_targets)
            outputs.append(output.data)
        return weighted / len(items), _score(np.concatenate(outputs), targets, task)

    @staticmethod
    def predict(model: Persformer, items: Sequence[FeaturizedDiagram], batch_size: int = 32) -> np.ndarray:
        outputs = []
        for start in range(0, len(items), batch_size):
            features, mask = pad_batch(items[start:start + batch_size])
            outputs.append(model.predict(features, mask))
        return np.concatenate(outputs)

    @staticmethod
    def train(
        dataset: DiagramDataset,
        config: PersformerConfig,
        optim: OptimSpec,
        seed: int,
        task: Task,
    ) -> TrainResult:
        """
        Mini-batch training with a seeded shuffle, evaluated on the test split
        after every epoch.

        Returns:
            TrainResult holding the model at its best test epoch and the full trace

        Raises:
            TooFewItems: if the training split is empty
            InvalidLabels: if labels do not fit the task
            TrainingDiverged: if the loss becomes non-finite
        """
        items = featurize_dataset(dataset)
        if items and items[0].width != config.input_dim:
            raise InvalidLabels(
                f"Features have width {items[0].width} but the model expects {config.input_dim}"
            )
        targets = _targets(dataset, task, config.n_outputs)
        train_idx = np.asarray(dataset.split.get("train", []), dtype=np.int64)
        test_idx = np.asarray(dataset.split.get("test", []), dtype=np.int64)
        if not len(train_idx):
            raise TooFewItems("Training split is empty")
        if not len(test_idx):
            logger.warning("No test split; evaluating on the training split")
            test_idx = train_idx
        train_items = [items[i] for i in train_idx]
        test_items = [items[i] for i in test_idx]
        train_targets, test_targets = targets[train_idx], targets[test_idx]

        model = Persformer(config, seed=seed)
        rng = np.random.default_rng(seed)
        steps_per_epoch = math.ceil(len(train_items) / optim.batch_size)
        metrics = RunMetrics(seed=seed)
        adam = AdamState()
        best_state: Optional[Dict[str, np.ndarray]] = None
        best_metric = -math.inf
        started = time.perf_counter()
        step = 0

        for epoch in range(optim.total_epochs):
            metrics.lr.append(lr_schedule(step, steps_per_epoch, optim))
            order = rng.permutation(len(train_items))
            epoch_loss = 0.0
            for start in range(0, len(order), optim.batch_size):
                batch = order[start:start + optim.batch_size]
                features, mask = pad_batch([train_items[i] for i in batch])
                dropout_seed = int(rng.integers(0, 2 ** 31))
                model.state.zero_grad()
                output = model.forward(features, mask, train=True, seed=dropout_seed)
                loss = _loss(output, train_targets[batch], task)
                lr = lr_schedule(step, steps_per_epoch, optim)
                if not math.isfinite(loss.item()):
                    raise TrainingDiverged(epoch, step, lr, loss.item())
                backward(loss)
                grads = {
                    name: tensor.grad if tensor.grad is not None else np.zeros_like(tensor.data)
                    for name, tensor in model.state.items()
                }
                if optim.clip_norm is not None:
                    grads = clip_by_global_norm(grads, optim.clip_norm)
                updated, adam = adamw_step(model.state.arrays(), grads, adam, lr, optim)
                model.state = ModelState.from_arrays(updated)
                if not model.state.is_finite():
                    raise TrainingDiverged(epoch, step, lr, loss.item())
                epoch_loss += loss.item() * len(batch)
                step += 1

            test_loss, metric = TrainingService.evaluate(
                model, test_items, test_targets, task, optim.batch_size
            )
            metrics.train_loss.append(epoch_loss / len(train_items))
            metrics.test_loss.append(test_loss)
            metrics.metric.append(metric)
            if metric > best_metric:
                best_metric = metric
                best_state = model.state.arrays()
                metrics.best_epoch = epoch
            logger.info(
                f"Epoch {epoch + 1}/{optim.total_epochs}: train_loss={metrics.train_loss[-1]:.4f} "
                f"test_loss={test_loss:.4f} metric={metric:.4f}"
            )

        metrics.wall_clock = time.perf_counter() - started
        if best_state is not None:
            model.state = ModelState.from_arrays(best_state)
        logger.info(
            f"Training finished in {metrics.wall_clock:.1f}s; best metric {best_metric:.4f} "
            f"at epoch {metrics.best_epoch + 1}"
        )
        return TrainResult(model=model, metrics=metrics, task=task)

    @staticmethod
    def cross_validate(
        dataset: DiagramDataset,
        k: int,
        config: PersformerConfig,
        optim: OptimSpec,
        seed: int,
        task: Task = Task.CLASSIFICATION,
    ) -> CrossValidationResult:
        """
        k-fold cross-validation, stratified by class for classification.

        Each fold trains a fresh model and reports its best test metric; the result
        carries the mean and the sample standard deviation over folds.
        """
        if k < 2:
            raise TooFewItems(f"Cross-validation needs k >= 2, got {k}")
        if len(dataset) < k:
            raise TooFewItems(f"{len(dataset)} items cannot fill {k} folds")
        labels = _targets(dataset, task, config.n_outputs)
        if task is Task.CLASSIFICATION:
            splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed % 2 ** 32)
        else:
            splitter = KFold(n_splits=k, shuffle=True, random_state=seed % 2 ** 32)
        scores = []
        for fold, (train_idx, test_idx) in enumerate(splitter.split(np.zeros(len(labels)), labels)):
            split = {"train": sorted(int(i) for i in train_idx), "test": sorted(int(i) for i in test_idx)}
            fold_data = DiagramDataset(dataset.diagrams, split, dataset.metadata)
            result = TrainingService.train(fold_data, config, optim, seed + fold, task)
            scores.append(result.metrics.best_metric)
            logger.info(f"Fold {fold + 1}/{k}: metric {scores[-1]:.4f}")
        values = np.asarray(scores)
        return CrossValidationResult(
            fold_scores=tuple(float(s) for s in values),
            mean=float(values.mean()),
            std=float(values.std(ddof=1)),
        )


def train_classifier(
    dataset: DiagramDataset, config: PersformerConfig, optim: OptimSpec, seed: int
) -> TrainResult:
    return TrainingService.train(dataset, config, optim, seed, Task.CLASSIFICATION)


def train_regressor(
    dataset: DiagramDataset, config: PersformerConfig, optim: OptimSpec, seed: int
) -> TrainResult:
    return TrainingService.train(dataset, config, optim, seed, Task.REGRESSION)


def k_fold_cv(
    dataset: DiagramDataset, k: int, config: PersformerConfig, optim: OptimSpec, seed: int
) -> CrossValidationResult:
    return TrainingService.cross_validate(dataset, k, config, optim, seed, Task.CLASSIFICATION)
