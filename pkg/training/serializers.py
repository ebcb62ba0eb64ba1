"""
Run directory layout: model checkpoint, metrics trace and config echo.
"""
import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from persformer.serializers import save_model

from .models import RunMetrics, TrainResult

logger = logging.getLogger(__name__)

METRICS_HEADER = ["epoch", "train_loss", "test_loss", "metric"]
METRICS_FILE = "metrics.csv"
SUMMARY_FILE = "run.json"
CONFIG_ECHO_FILE = "config.json"


def write_metrics(metrics: RunMetrics, path: Union[str, Path]) -> None:
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        for epoch in range(metrics.n_epochs):
            writer.writerow(
                [
                    epoch,
                    repr(metrics.train_loss[epoch]),
                    repr(metrics.test_loss[epoch]),
                    repr(metrics.metric[epoch]),
                ]
            )


def read_metrics(path: Union[str, Path], seed: int = 0) -> RunMetrics:
    metrics = RunMetrics(seed=seed)
    with Path(path).open(newline="") as handle:
        for row in csv.DictReader(handle):
            metrics.train_loss.append(float(row["train_loss"]))
            metrics.test_loss.append(float(row["test_loss"]))
            metrics.metric.append(float(row["metric"]))
    return metrics


def run_summary(result: TrainResult) -> Dict[str, Any]:
    metrics = result.metrics
    return {
        "task": result.task.value,
        "seed": metrics.seed,
        "epochs": metrics.n_epochs,
        "best_epoch": metrics.best_epoch,
        "best_metric": metrics.best_metric,
        "lr": metrics.lr,
        "wall_clock": metrics.wall_clock,
    }


def save_run(result: TrainResult, directory: Union[str, Path], config_echo: Dict[str, Any]) -> Path:
    """Write the best model, metrics.csv, run.json and the experiment config echo."""
    directory = Path(directory)
    save_model(result.model, directory)
    write_metrics(result.metrics, directory / METRICS_FILE)
    (directory / SUMMARY_FILE).write_text(json.dumps(run_summary(result), indent=2) + "\n")
    (directory / CONFIG_ECHO_FILE).write_text(
        json.dumps(config_echo, indent=2, sort_keys=True, default=str) + "\n"
    )
    logger.info(f"Run written to {directory}")
    return directory
