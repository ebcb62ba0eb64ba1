"""
Data Generation Tests

Linked twist map orbits, constant-curvature disc samples, the MUTAG loader and
the dataset builders.
"""
import math
from collections import Counter

import numpy as np
import pytest
from pydantic import ValidationError

from config import settings
from datagen.curvature import (
    analytic_mean_radius,
    geodesic_distances,
    sample_constant_curvature_disc,
    sample_disc_polar,
)
from datagen.exceptions import GuardExceeded, InconsistentIndices, InvalidCurvatureRadius, InvalidLabelSet, ParseError
from datagen.models import CurvatureSampleSpec, LabeledGraphSet, OrbitSpec, Precision
from datagen.mutag import load_mutag
from datagen.orbits import (
    arbitrary_precision_orbit,
    first_step_above,
    generate_orbit,
    initial_point,
    orbit_divergence_study,
    orbit_from_initial_point,
    torus_distance,
)
from datagen.services import DataGenService, split_indices
from persistence.models import Graph
from utils.factories import random_graph


@pytest.fixture
def mutag_dir(tmp_path):
    """Two graphs: an edge labeled -1 and a triangle labeled 1."""
    (tmp_path / "MUTAG_A.txt").write_text("1, 2\n2, 1\n3, 4\n4, 5\n3, 5\n")
    (tmp_path / "MUTAG_graph_indicator.txt").write_text("1\n1\n2\n2\n2\n")
    (tmp_path / "MUTAG_graph_labels.txt").write_text("-1\n1\n")
    return tmp_path


class TestOrbits:
    """Test suite for linked twist map orbits."""

    def test_single_step(self):
        points = orbit_from_initial_point(0.5, 0.5, 2.5, 2)
        assert points[0].tolist() == [0.5, 0.5]
        assert points[1].tolist() == [0.125, 0.7734375]

    def test_first_point_is_seeded_initial_point(self):
        orbit = generate_orbit(OrbitSpec(rho=4.3, n_points=10, seed=7))
        assert tuple(orbit[0]) == initial_point(7)

    def test_deterministic(self):
        spec = OrbitSpec(rho=4.1, n_points=500, seed=3)
        np.testing.assert_array_equal(generate_orbit(spec), generate_orbit(spec))

    def test_seeds_differ(self):
        first = generate_orbit(OrbitSpec(rho=4.1, n_points=5, seed=1))
        second = generate_orbit(OrbitSpec(rho=4.1, n_points=5, seed=2))
        assert not np.array_equal(first, second)

    def test_points_stay_on_unit_torus(self):
        orbit = generate_orbit(OrbitSpec(rho=4.3, n_points=2000, seed=11))
        assert orbit.shape == (2000, 2)
        assert np.all((orbit >= 0.0) & (orbit < 1.0))

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            OrbitSpec(rho=0.0)
        with pytest.raises(ValidationError):
            OrbitSpec(rho=2.5, n_points=0)

    def test_arbitrary_precision_orbit(self):
        orbit = generate_orbit(OrbitSpec(rho=2.5, n_points=30, seed=5, precision=Precision.ARBITRARY))
        assert orbit.shape == (30, 2)
        assert tuple(orbit[0]) == initial_point(5)
        np.testing.assert_array_equal(orbit, arbitrary_precision_orbit(*initial_point(5), 2.5, 30))

    def test_torus_distance_wraps(self):
        assert torus_distance(np.array([0.05, 0.5]), np.array([0.95, 0.5])) == pytest.approx(0.1)


class TestDivergenceStudy:
    """Test suite for float64 versus arbitrary-precision orbits."""

    def test_step_zero_agrees(self):
        study = orbit_divergence_study(4.3, seed=0, n=50)
        assert len(study) == 50
        assert study[0] == (0, 0.0)
        assert [step for step, _ in study] == list(range(50))

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            orbit_divergence_study(4.3, seed=0, n=settings.divergence_max_steps + 1)

    def test_first_step_above(self):
        study = [(0, 0.0), (1, 1e-5), (2, 0.5)]
        assert first_step_above(study, 1e-3) == 2
        assert first_step_above(study, 1.0) == -1

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_divergence_envelope(self, seed):
        divergence = np.array([value for _, value in orbit_divergence_study(4.3, seed=seed, n=200)])
        envelope = np.maximum.accumulate(divergence)
        assert envelope[0] == 0.0
        assert np.all(np.diff(envelope) >= 0.0)
        assert envelope[-1] > 0.0
        assert envelope[-1] <= math.sqrt(2.0) / 2.0 + 1e-12


class TestCurvatureSamples:
    """Test suite for geodesic disc samples."""

    @pytest.mark.parametrize("curvature", [0.0, 1.0, -1.0])
    def test_antipodal_boundary_points(self, curvature):
        dist = geodesic_distances(curvature, np.array([1.0, 1.0]), np.array([0.0, math.pi]))
        assert dist[0, 1] == pytest.approx(2.0, abs=1e-12)

    def test_same_angle_is_radial_difference(self):
        dist = geodesic_distances(-2.0, np.array([0.2, 0.9]), np.array([1.0, 1.0]))
        assert dist[0, 1] == pytest.approx(0.7, abs=1e-12)

    def test_distance_matrix_shape(self):
        dist = sample_constant_curvature_disc(CurvatureSampleSpec(curvature=0.5, n_points=40, seed=2))
        assert dist.shape == (40, 40)
        np.testing.assert_array_equal(dist, dist.T)
        assert np.all(np.diag(dist) == 0.0)
        assert dist.max() <= 2.0 + 1e-12

    @pytest.mark.parametrize("curvature", [-4.0, -1.0, 0.0, 1.0, 2.0])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_triangle_inequality(self, curvature, seed):
        dist = sample_constant_curvature_disc(CurvatureSampleSpec(curvature=curvature, n_points=30, seed=seed))
        through = dist[:, :, None] + dist[None, :, :]
        assert np.all(dist[:, None, :] <= through + 1e-9)

    def test_radius_check(self):
        with pytest.raises(InvalidCurvatureRadius):
            sample_disc_polar(math.pi ** 2, 10, seed=0)

    def test_flat_mean_radius(self):
        assert analytic_mean_radius(0.0) == pytest.approx(2.0 / 3.0)

    @pytest.mark.parametrize("curvature", [-2.0, 0.0, 1.0])
    def test_sample_mean_radius(self, curvature):
        radius, angle = sample_disc_polar(curvature, 20000, seed=4)
        assert np.all((radius >= 0.0) & (radius <= 1.0))
        assert radius.mean() == pytest.approx(analytic_mean_radius(curvature), abs=0.01)


class TestMutagLoader:
    """Test suite for the TU-format graph loader."""

    def test_load(self, mutag_dir):
        graph_set = load_mutag(mutag_dir)
        assert graph_set.graphs == (
            Graph(2, frozenset({(0, 1)})),
            Graph(3, frozenset({(0, 1), (1, 2), (0, 2)})),
        )
        assert graph_set.labels == (0, 1)
        assert graph_set.node_counts() == (2, 3)

    def test_parse_error_reports_line(self, mutag_dir):
        (mutag_dir / "MUTAG_A.txt").write_text("1, 2\n2 1\n")
        with pytest.raises(ParseError) as excinfo:
            load_mutag(mutag_dir)
        assert excinfo.value.line_no == 2
        assert ":2:" in str(excinfo.value)

    def test_edge_across_graphs(self, mutag_dir):
        (mutag_dir / "MUTAG_A.txt").write_text("2, 3\n")
        with pytest.raises(InconsistentIndices):
            load_mutag(mutag_dir)

    def test_label_set_checked(self, mutag_dir):
        (mutag_dir / "MUTAG_graph_labels.txt").write_text("2\n1\n")
        with pytest.raises(InvalidLabelSet):
            load_mutag(mutag_dir)

    def test_self_loops_dropped(self, mutag_dir):
        (mutag_dir / "MUTAG_A.txt").write_text("1, 1\n1, 2\n")
        graph_set = load_mutag(mutag_dir)
        assert graph_set.graphs[0].edges == frozenset({(0, 1)})


class TestDatasetBuilders:
    """Test suite for the labeled diagram dataset builders."""

    def test_orbit_dataset_is_balanced(self):
        dataset = DataGenService.orbit_dataset(per_class=10, n_points=60, seed=0)
        assert len(dataset) == 50
        assert Counter(dataset.labels) == {label: 10 for label in range(5)}
        assert len(dataset.split["train"]) == 35
        assert len(dataset.split["test"]) == 15
        assert Counter(dataset.labels[i] for i in dataset.split["test"]) == {label: 3 for label in range(5)}
        assert dataset.metadata["n_classes"] == 5

    def test_orbit_dataset_is_deterministic(self):
        first = DataGenService.orbit_dataset(per_class=2, n_points=40, seed=9)
        second = DataGenService.orbit_dataset(per_class=2, n_points=40, seed=9)
        assert first.diagrams == second.diagrams
        assert first.split == second.split

    def test_orbit_dataset_per_class_checked(self):
        with pytest.raises(ValueError):
            DataGenService.orbit_dataset(per_class=0, n_points=10, seed=0)

    def test_curvature_dataset(self):
        dataset = DataGenService.curvature_dataset(n_clouds=4, n_points=30, seed=1)
        assert len(dataset) == 4
        assert all(-2.0 <= label < 1.0 for label in dataset.labels)
        assert all(p.hom_dim == 1 for d in dataset.diagrams for p in d.points)
        assert dataset.metadata["task"] == "curvature_regress"

    def test_graph_dataset(self, rng):
        graphs = tuple(random_graph(rng, int(rng.integers(2, 9))) for _ in range(10))
        dataset = DataGenService.graph_dataset(LabeledGraphSet(graphs, tuple(i % 2 for i in range(10))), seed=0, t=1.0)
        assert len(dataset) == 10
        assert dataset.metadata["use_ext_types"] is True
        assert dataset.labels == [i % 2 for i in range(10)]

    def test_split_indices_partition(self):
        split = split_indices(20, seed=3)
        assert sorted(split["train"] + split["test"]) == list(range(20))
        assert len(split["test"]) == 6

    def test_tiny_split_falls_back_to_unstratified(self):
        split = split_indices(10, seed=0, stratify=[0, 1, 2, 3, 4] * 2)
        assert len(split["test"]) == 3
        assert sorted(split["train"] + split["test"]) == list(range(10))
