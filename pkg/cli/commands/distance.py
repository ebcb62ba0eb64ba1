"""
distance: exact Wasserstein-type distance between two diagram files.
"""
import math

from diagrams.matching import diagonal_wasserstein_p, wasserstein_p
from diagrams.serializers import read_diagram

from ..base import BaseCommand, existing_path, p_value


class Command(BaseCommand):
    help = "Print W^p (wp, equal sizes) or the diagonal-augmented W_d^p (diag-wp) of two diagrams"

    def add_arguments(self, parser):
        parser.add_argument("metric", choices=("wp", "diag-wp"))
        parser.add_argument("first", type=existing_path)
        parser.add_argument("second", type=existing_path)
        parser.add_argument("--p", type=p_value, default=2.0, help="Exponent >= 1 or inf")

    def handle(self, **options):
        first, second = read_diagram(options["first"]), read_diagram(options["second"])
        p = options["p"]
        if options["metric"] == "wp":
            cost = wasserstein_p(first, second, p)
        else:
            cost = diagonal_wasserstein_p(first, second, p).cost
        self.write("inf" if math.isinf(cost) else format(cost, ".17g"))
