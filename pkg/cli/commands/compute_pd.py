"""
compute-pd: persistence diagram of a point cloud, distance matrix or graph.
"""
import logging
from pathlib import Path

from datagen.mutag import load_mutag
from datagen.services import DataGenService
from diagrams.serializers import write_dataset, write_diagram
from persistence.serializers import read_distance_matrix, read_graph, read_point_cloud
from persistence.services import PersistenceService

from ..base import BaseCommand, existing_path
from ..exceptions import CommandError

logger = logging.getLogger(__name__)

METHODS = ("alpha", "rips", "extended-hks")


class Command(BaseCommand):
    help = "Compute an alpha, Rips or HKS extended persistence diagram"

    def add_arguments(self, parser):
        parser.add_argument("method", choices=METHODS)
        parser.add_argument(
            "input",
            type=existing_path,
            nargs="?",
            help="Point cloud CSV (alpha), distance matrix CSV (rips) or graph JSON (extended-hks)",
        )
        parser.add_argument("--output", type=Path, required=True, help="Diagram CSV or dataset directory")
        parser.add_argument("--max-scale", type=float, default=None, help="Rips truncation scale")
        parser.add_argument("--t", type=float, default=None, help="HKS diffusion time")
        parser.add_argument(
            "--mutag-dir", type=existing_path, default=None, help="Build the whole graph dataset instead"
        )

    def handle(self, **options):
        method, source, output = options["method"], options["input"], options["output"]
        if options["mutag_dir"] is not None:
            if method != "extended-hks":
                raise CommandError("--mutag-dir is only valid with extended-hks")
            graph_set = load_mutag(options["mutag_dir"])
            dataset = DataGenService.graph_dataset(
                graph_set, self.seed(options), t=options["t"], jobs=options["jobs"]
            )
            write_dataset(output, dataset)
            self.write_json({"dataset": str(output), "size": len(dataset)})
            return
        if source is None:
            raise CommandError(f"compute-pd {method} needs an input file")
        if method == "alpha":
            diagram = PersistenceService.alpha_diagram(read_point_cloud(source))
        elif method == "rips":
            diagram = PersistenceService.rips_diagram(
                read_distance_matrix(source), max_scale=options["max_scale"]
            )
        else:
            diagram = PersistenceService.hks_extended_diagram(read_graph(source), t=options["t"])
        write_diagram(diagram, output)
        logger.info(f"{method} diagram with {len(diagram)} points written to {output}")
        self.write_json({"diagram": str(output), "points": len(diagram)})
