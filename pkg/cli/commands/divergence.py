"""
divergence: float64 versus high-precision orbits of the linked twist map.
"""
import csv
import logging
from pathlib import Path

from datagen.orbits import first_step_above, log_slope, orbit_divergence_study

from ..base import BaseCommand

logger = logging.getLogger(__name__)

THRESHOLD = 1e-3


class Command(BaseCommand):
    help = "Torus distance between float64 and high-precision orbits, per step and seed"

    def add_arguments(self, parser):
        parser.add_argument("--rho", type=float, default=4.3)
        parser.add_argument("--n", type=int, default=1000, help="Steps per orbit")
        parser.add_argument("--n-seeds", type=int, default=10)
        parser.add_argument("--output", type=Path, required=True, help="CSV seed,step,divergence")

    def handle(self, **options):
        base = self.seed(options)
        output = options["output"]
        output.parent.mkdir(parents=True, exist_ok=True)
        per_seed = []
        with output.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["seed", "step", "divergence"])
            for seed in range(base, base + options["n_seeds"]):
                study = orbit_divergence_study(options["rho"], seed, options["n"])
                writer.writerows([seed, step, repr(value)] for step, value in study)
                crossing = first_step_above(study, THRESHOLD)
                per_seed.append({"seed": seed, "log_slope": log_slope(study), "first_step_above": crossing})
                logger.info(f"Seed {seed}: divergence exceeds {THRESHOLD} at step {crossing}")
        exceeded = sum(1 for item in per_seed if item["first_step_above"] >= 0)
        self.write_json({"rho": options["rho"], "seeds": per_seed, "exceeded": exceeded, "threshold": THRESHOLD})
