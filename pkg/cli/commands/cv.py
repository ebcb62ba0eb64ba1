"""
cv: k-fold cross-validation of an experiment config.
"""
import json
from pathlib import Path

from training.services import TrainingService

from ..base import BaseCommand
from ..experiments import prepare
from .train import add_experiment_arguments, experiment_from_options


class Command(BaseCommand):
    help = "k-fold cross-validation; prints per-fold scores with their mean and std"

    def add_arguments(self, parser):
        add_experiment_arguments(parser)
        parser.add_argument("--folds", type=int, default=10)

    def handle(self, **options):
        experiment = experiment_from_options(options)
        seed = experiment.resolved_seed()
        dataset, network = prepare(experiment, seed, options["jobs"])
        result = TrainingService.cross_validate(
            dataset, options["folds"], network, experiment.optim, seed, experiment.task.training_task
        )
        summary = {
            "folds": options["folds"],
            "fold_scores": list(result.fold_scores),
            "mean": result.mean,
            "std": result.std,
            "seed": seed,
        }
        output = Path(experiment.output_dir)
        output.mkdir(parents=True, exist_ok=True)
        (output / "cv.json").write_text(json.dumps(summary, indent=2) + "\n")
        self.write_json(summary)
