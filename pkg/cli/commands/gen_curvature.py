"""
gen-curvature: one constant-curvature disc sample, or a regression dataset.
"""
import logging
from pathlib import Path

from datagen.curvature import sample_constant_curvature_disc
from datagen.models import CurvatureSampleSpec
from datagen.services import DataGenService
from diagrams.serializers import write_dataset
from persistence.serializers import write_distance_matrix

from ..base import BaseCommand

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Sample a geodesic disc of curvature K (--curvature) or a curvature dataset (--n-clouds)"

    def add_arguments(self, parser):
        mode = parser.add_mutually_exclusive_group(required=True)
        mode.add_argument("--curvature", type=float, help="Single sample; writes its distance matrix")
        mode.add_argument("--n-clouds", type=int, help="Clouds in a full dataset")
        parser.add_argument("--n", type=int, default=1000, help="Points per cloud")
        parser.add_argument("--k-min", type=float, default=-2.0)
        parser.add_argument("--k-max", type=float, default=1.0)
        parser.add_argument("--max-scale", type=float, default=None, help="Rips truncation scale")
        parser.add_argument("--output", type=Path, required=True, help="CSV file or dataset directory")

    def handle(self, **options):
        seed = self.seed(options)
        output = options["output"]
        if options["curvature"] is not None:
            spec = CurvatureSampleSpec(curvature=options["curvature"], n_points=options["n"], seed=seed)
            output.parent.mkdir(parents=True, exist_ok=True)
            write_distance_matrix(sample_constant_curvature_disc(spec), output)
            logger.info(f"Disc K={spec.curvature} with {spec.n_points} points written to {output}")
            return
        dataset = DataGenService.curvature_dataset(
            options["n_clouds"],
            options["n"],
            seed,
            curvature_range=(options["k_min"], options["k_max"]),
            max_scale=options["max_scale"],
            jobs=options["jobs"],
        )
        write_dataset(output, dataset)
        self.write_json({"dataset": str(output), "size": len(dataset)})
