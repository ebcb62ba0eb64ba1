"""
Diagram Core Tests

Diagram points, featurization, batch padding, exact Wasserstein-type distances
and the diagram file formats.
"""
import math

import numpy as np
import pytest

from diagrams.exceptions import (
    DiagramFormatError,
    DimOutOfRange,
    EmptyBatch,
    FeatureWidthMismatch,
    InfiniteDeath,
    InvalidP,
    InvalidPoint,
    SizeMismatch,
)
from diagrams.features import feature_width, featurize, pad_batch
from diagrams.matching import (
    bottleneck_distance,
    diagonal_projection,
    diagonal_wasserstein_p,
    matching_cost,
    wasserstein_matching,
    wasserstein_p,
)
from diagrams.models import DiagramDataset, DiagramPoint, ExtType, PersistenceDiagram
from diagrams.serializers import read_dataset, read_diagram, write_dataset, write_diagram
from utils.assertions import DATASET_METADATA_SCHEMA, TopologyAssertions
from utils.factories import random_diagram


def pd(*pairs, hom_dim=0):
    return PersistenceDiagram.from_pairs(pairs, hom_dim=hom_dim)


class TestDiagramPoints:
    """Test suite for diagram point validation."""

    @pytest.fixture(autouse=True)
    def setup(self):
        """Setup test fixtures."""
        self.point = DiagramPoint(0.1, 0.4, 1)

    def test_lifetime(self):
        assert self.point.lifetime == pytest.approx(0.3)

    def test_ordinary_point_needs_birth_before_death(self):
        with pytest.raises(InvalidPoint):
            DiagramPoint(0.5, 0.5, 0)

    def test_nan_rejected(self):
        with pytest.raises(InvalidPoint):
            DiagramPoint(math.nan, 1.0, 0)

    def test_extended_point_may_die_before_birth(self):
        point = DiagramPoint(2.0, 0.0, 1, ExtType.EXTENDED_MINUS)
        assert point.key == (1, ExtType.EXTENDED_MINUS)

    def test_extended_point_must_be_finite(self):
        with pytest.raises(InvalidPoint):
            DiagramPoint(0.0, math.inf, 0, ExtType.EXTENDED_PLUS)

    def test_negative_dimension_rejected(self):
        with pytest.raises(InvalidPoint):
            DiagramPoint(0.0, 1.0, -1)

    @pytest.mark.parametrize(
        "point, expected",
        [((0, 2), (1, 1)), ((3, 3), (3, 3)), ((0.2, 0.8), (0.5, 0.5))],
    )
    def test_diagonal_projection(self, point, expected):
        assert diagonal_projection(point) == pytest.approx(expected)


class TestFeaturization:
    """Test suite for featurize and pad_batch."""

    @pytest.fixture(autouse=True)
    def setup(self):
        """Setup test fixtures."""
        self.diagram = PersistenceDiagram(
            (DiagramPoint(0.1, 0.4, 1), DiagramPoint(0.1, 0.4, 0))
        )

    def test_dimension_one_hot(self):
        vectors = featurize(self.diagram, max_hom_dim=1).vectors
        np.testing.assert_array_equal(vectors[0], [0.1, 0.4, 0, 1])
        np.testing.assert_array_equal(vectors[1], [0.1, 0.4, 1, 0])

    def test_extended_type_one_hot(self):
        diagram = PersistenceDiagram((DiagramPoint(0.3, 0.2, 1, ExtType.EXTENDED_MINUS),))
        vectors = featurize(diagram, use_ext_types=True).vectors
        np.testing.assert_array_equal(vectors[0], [0.3, 0.2, 0, 0, 0, 1])

    def test_feature_width(self):
        assert feature_width(1, False) == 4
        assert feature_width(2, False) == 5
        assert feature_width(1, True) == 6

    def test_dimension_above_maximum_rejected(self):
        diagram = PersistenceDiagram((DiagramPoint(0.0, 1.0, 2),))
        with pytest.raises(DimOutOfRange):
            featurize(diagram, max_hom_dim=1)

    def test_ordinary_point_rejected_for_extended_features(self):
        with pytest.raises(DimOutOfRange):
            featurize(self.diagram, use_ext_types=True)

    def test_padding_masks(self, rng):
        items = [featurize(random_diagram(rng, n)) for n in (2, 3)]
        features, mask = pad_batch(items)
        assert features.shape == (2, 3, 4)
        np.testing.assert_array_equal(mask, [[1, 1, 0], [1, 1, 1]])
        np.testing.assert_array_equal(features[0, 2], np.zeros(4))

    def test_single_diagram_has_no_padding(self, rng):
        features, mask = pad_batch([featurize(random_diagram(rng, 4))])
        np.testing.assert_array_equal(mask, [[1, 1, 1, 1]])

    def test_unit_sizes(self, rng):
        features, _ = pad_batch([featurize(random_diagram(rng, 1)) for _ in range(2)])
        assert features.shape == (2, 1, 4)

    def test_empty_batch_rejected(self):
        with pytest.raises(EmptyBatch):
            pad_batch([])

    def test_mixed_widths_rejected(self, rng):
        first = featurize(random_diagram(rng, 2), max_hom_dim=1)
        second = featurize(random_diagram(rng, 2), max_hom_dim=2)
        with pytest.raises(FeatureWidthMismatch):
            pad_batch([first, second])


class TestDistances:
    """Test suite for W^p, diagonal W^p and the bottleneck distance."""

    @pytest.fixture(autouse=True)
    def setup(self, rng):
        """Setup test fixtures."""
        self.rng = rng

    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    def test_identical_diagrams_at_zero(self, p):
        diagram = random_diagram(self.rng, 6)
        assert wasserstein_p(diagram, diagram, p) == 0.0
        assert diagonal_wasserstein_p(diagram, diagram, p).cost == 0.0

    def test_single_forced_matching(self):
        assert wasserstein_p(pd((0, 1)), pd((0, 2)), math.inf) == 1.0

    def test_best_of_two_bijections(self):
        assert wasserstein_p(pd((0, 1), (0, 2)), pd((0, 1.5), (0, 3)), 1) == pytest.approx(1.5)

    def test_diagonal_beats_direct_match_at_infinity(self):
        result = diagonal_wasserstein_p(pd((0, 2)), pd((0, 0.1)), math.inf)
        assert result.cost == pytest.approx(1.0)
        assert result.pairs == ()

    def test_diagonal_beats_direct_match_at_one(self):
        assert diagonal_wasserstein_p(pd((0, 2)), pd((0, 0.1)), 1).cost == pytest.approx(1.05)

    def test_against_empty_diagram(self):
        assert diagonal_wasserstein_p(pd((0, 2)), PersistenceDiagram(), math.inf).cost == 1.0

    @pytest.mark.parametrize("death, expected", [(0.002, 0.001), (1000.0, 500.0)])
    def test_large_order_keeps_scale(self, death, expected):
        result = diagonal_wasserstein_p(pd((0, death)), PersistenceDiagram(), 200)
        assert result.cost == pytest.approx(expected, rel=1e-12)
        assert result.unmatched_first == (0,)

    def test_large_order_matching(self):
        assert wasserstein_p(pd((0, 1000)), pd((0, 2000)), 200) == pytest.approx(1000.0, rel=1e-12)
        result = diagonal_wasserstein_p(pd((0, 2), (0, 4)), PersistenceDiagram(), 200)
        assert result.cost == pytest.approx(2.0, rel=1e-12)

    def test_both_empty(self):
        assert diagonal_wasserstein_p(PersistenceDiagram(), PersistenceDiagram(), 2).cost == 0.0

    def test_bottleneck_is_diagonal_infinity(self):
        first, second = random_diagram(self.rng, 4), random_diagram(self.rng, 5)
        assert bottleneck_distance(first, second) == diagonal_wasserstein_p(first, second, math.inf).cost

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            wasserstein_p(pd((0, 1)), pd((0, 1), (0, 2)), 2)

    @pytest.mark.parametrize("p", [0.5, 0.0, -1.0])
    def test_invalid_order(self, p):
        with pytest.raises(InvalidP):
            diagonal_wasserstein_p(pd((0, 1)), pd((0, 1)), p)

    def test_infinite_death_rejected(self):
        diagram = PersistenceDiagram((DiagramPoint(0.0, math.inf, 0),))
        with pytest.raises(InfiniteDeath):
            diagonal_wasserstein_p(diagram, diagram, 2)

    def test_points_only_match_within_dimension(self):
        first = pd((0, 1), hom_dim=0)
        second = pd((0, 1), hom_dim=1)
        assert wasserstein_p(first, second, 2) == math.inf
        assert diagonal_wasserstein_p(first, second, math.inf).cost == 0.5

    def test_reported_matching_reproduces_cost(self):
        first, second = random_diagram(self.rng, 5), random_diagram(self.rng, 3)
        result = diagonal_wasserstein_p(first, second, 2)
        recomputed = matching_cost(first, second, result.pairs, result.unmatched_first, result.unmatched_second, 2)
        assert recomputed == pytest.approx(result.cost, abs=1e-12)
        assert len(result.pairs) + len(result.unmatched_first) == 5
        assert len(result.pairs) + len(result.unmatched_second) == 3

    def test_symmetric(self):
        first, second = random_diagram(self.rng, 4), random_diagram(self.rng, 6)
        for p in (1, 2, math.inf):
            assert diagonal_wasserstein_p(first, second, p).cost == pytest.approx(
                diagonal_wasserstein_p(second, first, p).cost, abs=1e-12
            )

    def test_invariant_under_point_order(self):
        first, second = random_diagram(self.rng, 5), random_diagram(self.rng, 5)
        shuffled = first.permuted(self.rng.permutation(5))
        assert wasserstein_matching(first, second, 2).cost == pytest.approx(
            wasserstein_matching(shuffled, second, 2).cost, abs=1e-12
        )

    def test_common_shift_preserves_distance(self):
        first, second = random_diagram(self.rng, 4), random_diagram(self.rng, 4)
        before = diagonal_wasserstein_p(first, second, 2).cost
        after = diagonal_wasserstein_p(first.shifted(3.0), second.shifted(3.0), 2).cost
        assert after == pytest.approx(before, abs=1e-9)


class TestDiagramFiles:
    """Test suite for diagram and dataset CSV files."""

    @pytest.fixture(autouse=True)
    def setup(self, tmp_path, toy_dataset):
        """Setup test fixtures."""
        self.tmp_path = tmp_path
        self.dataset = toy_dataset

    def test_diagram_file_round_trip(self, rng):
        diagram = PersistenceDiagram(
            (DiagramPoint(0.1, 0.7, 0), DiagramPoint(2.0, 0.5, 1, ExtType.EXTENDED_MINUS))
        )
        write_diagram(diagram, self.tmp_path / "d.csv")
        assert (self.tmp_path / "d.csv").read_text().splitlines()[0] == "birth,death,hom_dim,ext_type"
        assert read_diagram(self.tmp_path / "d.csv").points == diagram.points

    def test_bad_header_rejected(self):
        path = self.tmp_path / "bad.csv"
        path.write_text("b,d\n0,1\n")
        with pytest.raises(DiagramFormatError):
            read_diagram(path)

    def test_bad_row_reports_line(self):
        path = self.tmp_path / "bad.csv"
        path.write_text("birth,death,hom_dim,ext_type\n0,1,0,-\n1,0,0,-\n")
        with pytest.raises(DiagramFormatError, match=":3:"):
            read_diagram(path)

    def test_dataset_round_trip(self):
        write_dataset(self.tmp_path / "ds", self.dataset)
        loaded = read_dataset(self.tmp_path / "ds")
        assert loaded.split == self.dataset.split
        assert loaded.labels == self.dataset.labels
        assert [d.points for d in loaded.diagrams] == [d.points for d in self.dataset.diagrams]
        TopologyAssertions.assert_json_schema(loaded.metadata, DATASET_METADATA_SCHEMA)

    def test_missing_manifest(self):
        with pytest.raises(DiagramFormatError):
            read_dataset(self.tmp_path)

    def test_replace_diagrams_keeps_split(self):
        replaced = self.dataset.replace_diagrams(self.dataset.diagrams[::-1], note="x")
        assert isinstance(replaced, DiagramDataset)
        assert replaced.split == self.dataset.split
        assert replaced.metadata["note"] == "x"
        assert replaced.diagrams[0] == self.dataset.diagrams[-1]
