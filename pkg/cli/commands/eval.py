"""
eval: loss and accuracy (or R^2) of a saved model on a dataset split.
"""
import numpy as np

from persformer.serializers import load_model
from training.models import Task
from training.services import TrainingService, featurize_dataset

from ..base import BaseCommand, existing_path
from ..exceptions import CommandError


class Command(BaseCommand):
    help = "Evaluate a trained run directory on a dataset split"

    def add_arguments(self, parser):
        parser.add_argument("--run", type=existing_path, required=True, help="Run directory written by train")
        parser.add_argument("--dataset", type=existing_path, required=True)
        parser.add_argument("--split", choices=("test", "train", "all"), default="test")
        parser.add_argument("--batch-size", type=int, default=32)

    def handle(self, **options):
        model = load_model(options["run"])
        dataset = self.load_dataset(options["dataset"])
        split = options["split"]
        indices = list(range(len(dataset))) if split == "all" else dataset.split.get(split, [])
        if not indices:
            raise CommandError(f"Split {split!r} is empty")
        task = Task.REGRESSION if model.config.n_outputs == 1 else Task.CLASSIFICATION
        items = featurize_dataset(dataset)
        dtype = np.float64 if task is Task.REGRESSION else np.int64
        targets = np.asarray([dataset.diagrams[i].label for i in indices], dtype=dtype)
        loss, metric = TrainingService.evaluate(
            model, [items[i] for i in indices], targets, task, options["batch_size"]
        )
        self.write_json({"split": split, "n": len(indices), "loss": loss, "metric": metric, "task": task.value})
