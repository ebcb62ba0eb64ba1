"""
Distance Oracle Tests

The assignment-based solvers against exhaustive enumeration, and the norm
inequalities relating W^p, W^q and the diagonal variant.
"""
import math

import numpy as np
import pytest

from diagrams.matching import diagonal_distance, diagonal_wasserstein_p, wasserstein_p
from utils.factories import grid_diagram, random_diagram
from utils.oracles import brute_force_diagonal_wasserstein, brute_force_wasserstein

ORDERS = (1.0, 2.0, math.inf)


@pytest.mark.acceptance
class TestExhaustiveEquivalence:
    """Solver output equals enumeration over every (partial) matching."""

    @pytest.fixture(autouse=True)
    def setup(self):
        """Setup test fixtures."""
        self.rng = np.random.default_rng(500)

    def test_diagonal_variant_matches_enumeration(self):
        for _ in range(500):
            first = grid_diagram(self.rng, int(self.rng.integers(0, 7)))
            second = grid_diagram(self.rng, int(self.rng.integers(0, 7)))
            expected = brute_force_diagonal_wasserstein(first, second, ORDERS)
            for p in ORDERS:
                assert diagonal_wasserstein_p(first, second, p).cost == expected[p], (
                    f"p={p}: {first.points} vs {second.points}"
                )

    def test_full_bijections_match_enumeration(self):
        for _ in range(500):
            n = int(self.rng.integers(1, 7))
            first = grid_diagram(self.rng, n, n_dims=1)
            second = grid_diagram(self.rng, n, n_dims=1)
            expected = brute_force_wasserstein(first, second, ORDERS)
            for p in ORDERS:
                assert wasserstein_p(first, second, p) == expected[p]

    def test_mixed_dimensions_match_enumeration(self):
        for _ in range(100):
            n = int(self.rng.integers(1, 6))
            first = grid_diagram(self.rng, n)
            second = first.permuted(self.rng.permutation(n)).shifted(0.5)
            expected = brute_force_wasserstein(first, second, ORDERS)
            for p in ORDERS:
                assert wasserstein_p(first, second, p) == expected[p]


@pytest.mark.acceptance
class TestNormInequalities:
    """Relations between the distances on equal-size pairs."""

    @pytest.fixture(autouse=True)
    def setup(self):
        """Setup test fixtures."""
        self.rng = np.random.default_rng(200)
        self.tolerance = 1e-9
        self.pairs = []
        for _ in range(200):
            n = int(self.rng.integers(1, 7))
            self.pairs.append((random_diagram(self.rng, n, max_hom_dim=0), random_diagram(self.rng, n, max_hom_dim=0)))

    def test_norm_equivalence(self):
        for first, second in self.pairs:
            n = len(first)
            w_inf = wasserstein_p(first, second, math.inf)
            for p in (1.0, 2.0):
                w_p = wasserstein_p(first, second, p)
                assert w_inf <= w_p + self.tolerance
                assert w_p <= n ** (1.0 / p) * w_inf + self.tolerance

    def test_partial_never_exceeds_full(self):
        for first, second in self.pairs:
            for p in ORDERS:
                assert diagonal_wasserstein_p(first, second, p).cost <= wasserstein_p(first, second, p) + self.tolerance

    def test_coincidence_below_smallest_diagonal_gap(self):
        checked = 0
        for first, _ in self.pairs:
            noise = self.rng.uniform(-0.01, 0.01, (len(first), 2))
            second = type(first).from_pairs(first.coordinates() + noise)
            if any(p.birth >= p.death for p in second.points):
                continue
            epsilon = min(diagonal_distance((p.birth, p.death)) for p in first.points + second.points)
            for p in ORDERS:
                partial = diagonal_wasserstein_p(first, second, p).cost
                if partial < epsilon:
                    checked += 1
                    assert partial == pytest.approx(wasserstein_p(first, second, p), abs=self.tolerance)
        assert checked > 0

    def test_triangle_inequality(self):
        for _ in range(200):
            a, b, c = (random_diagram(self.rng, int(self.rng.integers(0, 7))) for _ in range(3))
            for p in ORDERS:
                ab = diagonal_wasserstein_p(a, b, p).cost
                bc = diagonal_wasserstein_p(b, c, p).cost
                ac = diagonal_wasserstein_p(a, c, p).cost
                assert ac <= ab + bc + self.tolerance
