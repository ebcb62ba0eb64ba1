"""
gen-orbit: one orbit point cloud, or a labeled dataset of orbit diagrams.
"""
import logging
from pathlib import Path

from datagen.models import ORBIT_RHOS, OrbitSpec, Precision
from datagen.orbits import generate_orbit
from datagen.services import DataGenService
from diagrams.serializers import write_dataset
from persistence.serializers import write_point_cloud

from ..base import BaseCommand

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Generate a linked twist map orbit (--rho) or an orbit diagram dataset (--per-class)"

    def add_arguments(self, parser):
        mode = parser.add_mutually_exclusive_group(required=True)
        mode.add_argument("--rho", type=float, help="Single orbit with this parameter")
        mode.add_argument("--per-class", type=int, help="Orbits per class for a full dataset")
        parser.add_argument("--n", type=int, default=1000, help="Points per orbit")
        parser.add_argument(
            "--rhos", type=float, nargs="+", default=list(ORBIT_RHOS), help="Class parameters"
        )
        parser.add_argument(
            "--precision", choices=[p.value for p in Precision], default=Precision.FLOAT64.value
        )
        parser.add_argument("--output", type=Path, required=True, help="CSV file or dataset directory")

    def handle(self, **options):
        seed = self.seed(options)
        precision = Precision(options["precision"])
        output = options["output"]
        if options["rho"] is not None:
            spec = OrbitSpec(rho=options["rho"], n_points=options["n"], seed=seed, precision=precision)
            output.parent.mkdir(parents=True, exist_ok=True)
            write_point_cloud(generate_orbit(spec), output)
            logger.info(f"Orbit rho={spec.rho} with {spec.n_points} points written to {output}")
            return
        dataset = DataGenService.orbit_dataset(
            options["per_class"],
            options["n"],
            seed,
            jobs=options["jobs"],
            precision=precision,
            rhos=tuple(options["rhos"]),
        )
        write_dataset(output, dataset)
        self.write_json({"dataset": str(output), "size": len(dataset), "n_classes": len(options["rhos"])})
