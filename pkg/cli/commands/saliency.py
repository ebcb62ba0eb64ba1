"""
saliency: per-point saliency of a trained model, with optional bin profile and
percentile sweep exports.
"""
import logging
from pathlib import Path

from interpret.models import SaliencyTarget
from interpret.serializers import write_bin_profile, write_saliency, write_sweep
from interpret.services import DEFAULT_BINS, InterpretService
from persformer.serializers import load_model

from ..base import BaseCommand, existing_path
from ..exceptions import CommandError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Export saliency scores of a dataset split (plus bin profile and percentile sweep)"

    def add_arguments(self, parser):
        parser.add_argument("--run", type=existing_path, required=True)
        parser.add_argument("--dataset", type=existing_path, required=True)
        parser.add_argument("--output", type=Path, required=True, help="Saliency CSV")
        parser.add_argument("--split", choices=("test", "train", "all"), default="test")
        parser.add_argument("--wrt", choices=[t.value for t in SaliencyTarget], default=SaliencyTarget.FULL.value)
        parser.add_argument("--profile", type=Path, default=None, help="Bin profile CSV")
        parser.add_argument("--bins", type=int, default=DEFAULT_BINS)
        parser.add_argument("--sweep", type=float, nargs="+", default=None, help="Percentiles to evaluate")
        parser.add_argument("--sweep-output", type=Path, default=None, help="Percentile sweep CSV")

    def handle(self, **options):
        model = load_model(options["run"])
        dataset = self.load_dataset(options["dataset"])
        split = options["split"]
        indices = list(range(len(dataset))) if split == "all" else dataset.split.get(split, [])
        if not indices:
            raise CommandError(f"Split {split!r} is empty")
        scores = InterpretService.dataset_saliency(
            model, dataset, indices, wrt=SaliencyTarget(options["wrt"])
        )
        write_saliency(dict(enumerate(dataset.diagrams)), scores, options["output"])
        summary = {"saliency": str(options["output"]), "diagrams": len(scores)}
        if options["profile"] is not None and scores:
            keys = sorted(scores)
            profile = InterpretService.saliency_bin_profile(
                [dataset.diagrams[i] for i in keys], [scores[i] for i in keys], options["bins"]
            )
            write_bin_profile(profile, options["profile"])
            summary["profile"] = str(options["profile"])
        if options["sweep"]:
            if options["sweep_output"] is None:
                raise CommandError("--sweep needs --sweep-output")
            results = InterpretService.accuracy_under_filtering(model, dataset, options["sweep"])
            write_sweep(results, options["sweep_output"])
            summary["sweep"] = {str(q): metric for q, metric in results.items()}
        self.write_json(summary)
