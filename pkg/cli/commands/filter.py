"""
filter: write a copy of a dataset keeping only the salient points of every diagram.
"""
from pathlib import Path

from diagrams.serializers import write_dataset
from interpret.services import InterpretService
from persformer.serializers import load_model

from ..base import BaseCommand, existing_path


class Command(BaseCommand):
    help = "Filter every diagram at a saliency percentile and write the filtered dataset"

    def add_arguments(self, parser):
        parser.add_argument("--run", type=existing_path, required=True, help="Model used to score points")
        parser.add_argument("--dataset", type=existing_path, required=True)
        parser.add_argument("--percentile", type=float, default=80.0)
        parser.add_argument("--output", type=Path, required=True, help="New dataset directory")

    def handle(self, **options):
        model = load_model(options["run"])
        dataset = self.load_dataset(options["dataset"])
        filtered = InterpretService.filter_dataset(model, dataset, options["percentile"])
        write_dataset(options["output"], filtered)
        self.write_json(
            {
                "dataset": str(options["output"]),
                "points_before": sum(len(d) for d in dataset.diagrams),
                "points_after": sum(len(d) for d in filtered.diagrams),
            }
        )
