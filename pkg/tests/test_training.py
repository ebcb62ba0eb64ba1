"""
Training Tests

AdamW, gradient clipping, the learning-rate schedule, training loops,
cross-validation and run files.
"""
import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from diagrams.models import DiagramDataset
from persformer.models import PersformerConfig
from persformer.serializers import load_model
from training.exceptions import InvalidLabels, NonFiniteGradient, TooFewItems, TrainingDiverged
from training.models import AdamState, OptimSpec, RunMetrics, Task
from training.optim import adamw_step, clip_by_global_norm, global_norm, lr_schedule
from training.serializers import METRICS_HEADER, read_metrics, run_summary, save_run, write_metrics
from training.services import TrainingService, featurize_diagrams, k_fold_cv, train_classifier, train_regressor
from utils.assertions import RUN_SUMMARY_SCHEMA, TopologyAssertions
from utils.factories import separable_dataset
from utils.oracles import plain_adamw


def quick_optim(**overrides) -> OptimSpec:
    values = {"max_lr": 1e-2, "warmup_epochs": 0, "cycles": 1, "total_epochs": 10, "batch_size": 8}
    values.update(overrides)
    return OptimSpec(**values)


def regression_dataset(dataset: DiagramDataset) -> DiagramDataset:
    """Same diagrams labeled by their mean lifetime."""
    relabeled = [d.with_label(float(np.mean([p.lifetime for p in d.points]))) for d in dataset.diagrams]
    return dataset.replace_diagrams(relabeled, task="curvature_regress", n_classes=0)


class TestAdamW:
    """Test suite for the AdamW update."""

    def test_decay_only_step(self):
        spec = OptimSpec(weight_decay=0.01)
        params = {"w": np.array([1.0, -2.0, 0.5])}
        updated, state = adamw_step(params, {"w": np.zeros(3)}, AdamState(), 0.1, spec)
        np.testing.assert_allclose(updated["w"], 0.999 * params["w"], rtol=1e-15)
        assert state.step == 1

    def test_first_step_moves_by_lr(self):
        spec = OptimSpec(weight_decay=0.0)
        updated, _ = adamw_step({"w": np.array([0.0])}, {"w": np.array([1.0])}, AdamState(), 0.1, spec)
        assert updated["w"][0] == pytest.approx(-0.1 / (1.0 + 1e-8), rel=1e-12)

    def test_zero_gradient_without_decay(self):
        params = {"w": np.array([[1.0, 2.0]])}
        updated, _ = adamw_step(params, {"w": np.zeros((1, 2))}, AdamState(), 0.1, OptimSpec(weight_decay=0.0))
        np.testing.assert_array_equal(updated["w"], params["w"])

    @pytest.mark.parametrize("weight_decay", [0.0, 0.01])
    def test_matches_scalar_reference(self, rng, weight_decay):
        spec = OptimSpec(weight_decay=weight_decay)
        params = {"a": rng.normal(size=(2, 3)), "b": rng.normal(size=4)}
        grads = [{name: rng.normal(size=value.shape) for name, value in params.items()} for _ in range(6)]
        current, state = dict(params), AdamState()
        for step_grads in grads:
            current, state = adamw_step(current, step_grads, state, 0.05, spec)
        expected = plain_adamw(params, grads, 0.05, spec.betas, spec.eps, weight_decay)
        for name in params:
            np.testing.assert_allclose(current[name], expected[name], rtol=1e-12, atol=1e-15)

    def test_non_finite_gradient_rejected(self):
        params = {"w": np.ones(2)}
        with pytest.raises(NonFiniteGradient):
            adamw_step(params, {"w": np.array([1.0, np.nan])}, AdamState(), 0.1, OptimSpec())

    def test_clipping(self):
        clipped = clip_by_global_norm({"a": np.array([3.0]), "b": np.array([4.0])}, 1.0)
        assert global_norm(clipped) == pytest.approx(1.0)
        np.testing.assert_allclose(clipped["a"], [0.6])
        untouched = clip_by_global_norm({"a": np.array([0.3])}, 1.0)
        np.testing.assert_array_equal(untouched["a"], [0.3])


class TestSchedule:
    """Test suite for warmup followed by cosine decay with hard restarts."""

    @pytest.fixture(autouse=True)
    def setup(self):
        self.spec = OptimSpec(max_lr=1e-3, warmup_epochs=10, cycles=3, total_epochs=100)

    def test_warmup(self):
        assert lr_schedule(0, 1, self.spec) == 0.0
        assert lr_schedule(5, 1, self.spec) == pytest.approx(5e-4)
        assert lr_schedule(10, 1, self.spec) == pytest.approx(1e-3)

    def test_segment_midpoint(self):
        assert lr_schedule(25, 1, self.spec) == pytest.approx(5e-4)

    def test_hard_restarts(self):
        for start in (10, 40, 70):
            assert lr_schedule(start, 1, self.spec) == pytest.approx(1e-3)
            assert lr_schedule(start + 29, 1, self.spec) < 1e-5

    def test_decay_is_monotone_within_a_segment(self):
        TopologyAssertions.assert_nonincreasing([lr_schedule(s, 4, self.spec) for s in range(160, 280)], "lr")

    def test_zero_after_last_epoch(self):
        assert lr_schedule(100, 1, self.spec) == 0.0

    def test_steps_per_epoch_scaling(self):
        assert lr_schedule(20, 4, self.spec) == pytest.approx(lr_schedule(5, 1, self.spec))

    def test_warmup_cannot_exceed_total(self):
        with pytest.raises(ValidationError):
            OptimSpec(warmup_epochs=20, total_epochs=10)


class TestTrainingLoop:
    """Test suite for classification and regression training."""

    @pytest.fixture(autouse=True)
    def setup(self, small_config, toy_dataset):
        self.config = small_config
        self.dataset = toy_dataset

    def test_classifier_learns_separable_task(self):
        result = train_classifier(self.dataset, self.config, quick_optim(total_epochs=40), seed=0)
        metrics = result.metrics
        assert metrics.n_epochs == 40
        assert len(metrics.lr) == len(metrics.test_loss) == len(metrics.metric) == 40
        assert metrics.best_metric >= 0.8
        assert metrics.best_metric == max(metrics.metric)
        assert result.task is Task.CLASSIFICATION

    def test_training_is_deterministic(self):
        optim = quick_optim(total_epochs=3)
        first = train_classifier(self.dataset, self.config, optim, seed=5)
        second = train_classifier(self.dataset, self.config, optim, seed=5)
        assert first.metrics == second.metrics
        for name, array in first.model.state.arrays().items():
            np.testing.assert_array_equal(array, second.model.state[name].data)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_loss_decreases_over_ten_epochs(self, seed):
        result = train_classifier(self.dataset, self.config, quick_optim(), seed=seed)
        assert result.metrics.train_loss[-1] < result.metrics.train_loss[0]

    def test_returned_model_is_best_epoch(self):
        result = train_classifier(self.dataset, self.config, quick_optim(total_epochs=4), seed=2)
        items = featurize_diagrams([self.dataset.diagrams[i] for i in self.dataset.split["test"]])
        targets = np.array([self.dataset.diagrams[i].label for i in self.dataset.split["test"]])
        _, metric = TrainingService.evaluate(result.model, items, targets, Task.CLASSIFICATION)
        assert metric == pytest.approx(result.metrics.best_metric)

    def test_regressor(self):
        config = self.config.model_copy(update={"decoder_layers": [8, 6, 1]})
        result = train_regressor(regression_dataset(self.dataset), config, quick_optim(total_epochs=3), seed=0)
        assert result.task is Task.REGRESSION
        TopologyAssertions.assert_finite(result.metrics.train_loss, "train loss")
        TopologyAssertions.assert_finite(result.metrics.metric, "R^2")

    def test_overflowing_loss_stops_training(self):
        config = self.config.model_copy(update={"decoder_layers": [8, 6, 1]})
        huge = self.dataset.replace_diagrams([d.with_label(1e200) for d in self.dataset.diagrams], n_classes=0)
        with pytest.raises(TrainingDiverged) as excinfo:
            train_regressor(huge, config, quick_optim(total_epochs=2), seed=0)
        assert excinfo.value.epoch == 0
        assert excinfo.value.step == 0

    def test_regression_needs_one_output(self):
        with pytest.raises(InvalidLabels):
            train_regressor(regression_dataset(self.dataset), self.config, quick_optim(total_epochs=1), seed=0)

    def test_labels_must_fit_outputs(self):
        config = self.config.model_copy(update={"decoder_layers": [8, 1]})
        with pytest.raises(InvalidLabels):
            train_classifier(self.dataset, config, quick_optim(), seed=0)

    def test_empty_training_split(self):
        dataset = DiagramDataset(self.dataset.diagrams, {"train": [], "test": [0, 1]}, self.dataset.metadata)
        with pytest.raises(TooFewItems):
            train_classifier(dataset, self.config, quick_optim(), seed=0)

    def test_empty_diagram_becomes_zero_token(self):
        (item,) = featurize_diagrams([self.dataset.diagrams[0].subset([])])
        assert len(item) == 1
        assert not np.any(item.vectors)
        assert item.mask.tolist() == [1.0]
        for featurized in featurize_diagrams(self.dataset.diagrams):
            assert np.all(np.any(featurized.vectors[featurized.mask > 0] != 0.0, axis=1))


class TestCrossValidation:
    """Test suite for stratified k-fold cross-validation."""

    def test_fold_summary(self, small_config, toy_dataset):
        result = k_fold_cv(toy_dataset, 3, small_config, quick_optim(total_epochs=2), seed=1)
        assert len(result.fold_scores) == 3
        assert result.mean == pytest.approx(np.mean(result.fold_scores))
        assert result.std == pytest.approx(np.std(result.fold_scores, ddof=1))

    def test_fold_count_checked(self, small_config, toy_dataset):
        with pytest.raises(TooFewItems):
            k_fold_cv(toy_dataset, 1, small_config, quick_optim(), seed=0)
        small = separable_dataset(np.random.default_rng(0), n_items=2)
        with pytest.raises(TooFewItems):
            k_fold_cv(small, 3, small_config, quick_optim(), seed=0)


class TestRunFiles:
    """Test suite for metrics traces and run directories."""

    def test_metrics_round_trip(self, tmp_path):
        metrics = RunMetrics(seed=3, train_loss=[0.9, 0.5], test_loss=[1.0, 0.6], metric=[0.5, 0.75], lr=[0.0, 1e-3])
        write_metrics(metrics, tmp_path / "metrics.csv")
        lines = (tmp_path / "metrics.csv").read_text().splitlines()
        assert lines[0] == ",".join(METRICS_HEADER)
        assert len(lines) == 3
        loaded = read_metrics(tmp_path / "metrics.csv", seed=3)
        assert (loaded.train_loss, loaded.test_loss, loaded.metric) == (
            metrics.train_loss,
            metrics.test_loss,
            metrics.metric,
        )

    def test_save_run(self, tmp_path, small_config, toy_dataset):
        result = train_classifier(toy_dataset, small_config, quick_optim(total_epochs=2), seed=0)
        save_run(result, tmp_path / "run", {"task": "orbit_classify", "seed": 0})
        for name in ("model.bin", "model.json", "model_config.json", "metrics.csv", "run.json", "config.json"):
            assert (tmp_path / "run" / name).exists(), name
        summary = json.loads((tmp_path / "run" / "run.json").read_text())
        TopologyAssertions.assert_json_schema(summary, RUN_SUMMARY_SCHEMA)
        assert summary == json.loads(json.dumps(run_summary(result)))
        reloaded = load_model(tmp_path / "run")
        assert reloaded.config == small_config
        assert math.isfinite(summary["best_metric"])
