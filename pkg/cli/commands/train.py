"""
train: fit a model from an experiment config and write a run directory.
"""
import logging
from pathlib import Path

from diagrams.serializers import write_dataset
from training.serializers import run_summary, save_run
from training.services import TrainingService

from ..base import BaseCommand, existing_path
from ..experiments import prepare
from ..models import ExperimentConfig

logger = logging.getLogger(__name__)


def add_experiment_arguments(parser) -> None:
    parser.add_argument("--config", type=existing_path, default=None, help="Experiment TOML file")
    parser.add_argument("--task", default=None, help="orbit_classify | mutag_classify | curvature_regress")
    parser.add_argument("--dataset", default=None, help="Existing dataset directory")
    parser.add_argument("--epochs", type=int, default=None, help="Override optim.total_epochs")
    parser.add_argument("--batch-size", type=int, default=None, help="Override optim.batch_size")
    parser.add_argument("--lr", type=float, default=None, help="Override optim.max_lr")
    parser.add_argument("--output-dir", default=None, help="Run directory")


def experiment_from_options(options) -> ExperimentConfig:
    return ExperimentConfig.from_file(
        options["config"],
        {
            "task": options["task"],
            "dataset.path": options["dataset"],
            "optim.total_epochs": options["epochs"],
            "optim.batch_size": options["batch_size"],
            "optim.max_lr": options["lr"],
            "seed": options["seed"],
            "output_dir": options["output_dir"],
        },
    )


class Command(BaseCommand):
    help = "Train a Persformer and write checkpoint, metrics.csv, run.json and config.json"

    def add_arguments(self, parser):
        add_experiment_arguments(parser)

    def handle(self, **options):
        experiment = experiment_from_options(options)
        seed = experiment.resolved_seed()
        dataset, network = prepare(experiment, seed, options["jobs"])
        output = Path(experiment.output_dir)
        if experiment.dataset.path is None:
            write_dataset(output / "dataset", dataset)
        result = TrainingService.train(
            dataset, network, experiment.optim, seed, experiment.task.training_task
        )
        echo = experiment.echo()
        echo["seed"] = seed
        echo["model"] = network.model_dump(mode="json")
        save_run(result, output, echo)
        self.write_json(run_summary(result))
