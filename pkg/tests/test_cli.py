"""
Command-Line Tests

Each subcommand is run in-process through execute_from_command_line, reading
its JSON or text output from a captured stream.
"""
import csv
import io
import json

import pytest

from cli import execute_from_command_line
from cli.models import ExperimentConfig, ExperimentTask
from diagrams.serializers import read_dataset, read_diagram, write_dataset, write_diagram
from persistence.serializers import write_point_cloud
from utils.assertions import CONFIG_ECHO_SCHEMA, DATASET_METADATA_SCHEMA, RUN_SUMMARY_SCHEMA, TopologyAssertions
from utils.factories import random_diagram, separable_dataset

TINY_EXPERIMENT = """
task = "orbit_classify"

[model]
input_dim = 4
hidden_dim = 8
n_layers = 1
n_heads = 2
decoder_layers = [8, 2]
dropout_decoder = 0.0

[optim]
max_lr = 0.01
warmup_epochs = 0
cycles = 1
total_epochs = 2
batch_size = 8
"""


def run(*argv):
    """Exit code and captured standard output of one command."""
    stdout = io.StringIO()
    code = execute_from_command_line([str(a) for a in argv], stdout=stdout)
    return code, stdout.getvalue()


@pytest.mark.cli
class TestGeometryCommands:
    """Test suite for data generation, diagrams and distances."""

    def test_identical_diagrams_have_distance_zero(self, tmp_path, rng):
        path = tmp_path / "d.csv"
        write_diagram(random_diagram(rng, 6), path)
        code, out = run("distance", "diag-wp", path, path)
        assert code == 0
        assert out.strip() == "0"

    def test_distance_values(self, tmp_path):
        from diagrams.models import DiagramPoint, ExtType, PersistenceDiagram

        first = PersistenceDiagram((DiagramPoint(0.0, 1.0, 0, ExtType.NONE),))
        second = PersistenceDiagram((DiagramPoint(0.0, 2.0, 0, ExtType.NONE),))
        write_diagram(first, tmp_path / "a.csv")
        write_diagram(second, tmp_path / "b.csv")
        assert run("distance", "wp", tmp_path / "a.csv", tmp_path / "b.csv", "--p", "inf") == (0, "1\n")
        code, out = run("distance", "diag-wp", tmp_path / "a.csv", tmp_path / "b.csv", "--p", "1")
        assert code == 0
        assert float(out) == pytest.approx(1.0)

    def test_gen_orbit_is_reproducible(self, tmp_path):
        for name in ("a.csv", "b.csv"):
            assert run("gen-orbit", "--rho", 4.3, "--n", 200, "--seed", 1, "--output", tmp_path / name)[0] == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a.csv").read_text().splitlines()[0] == "x,y"

    def test_orbit_to_diagram_to_distance(self, tmp_path):
        assert run("gen-orbit", "--rho", 2.5, "--n", 150, "--seed", 2, "--output", tmp_path / "orbit.csv")[0] == 0
        code, out = run("compute-pd", "alpha", tmp_path / "orbit.csv", "--output", tmp_path / "pd.csv")
        assert code == 0
        assert json.loads(out)["points"] == len(read_diagram(tmp_path / "pd.csv"))
        assert run("distance", "wp", tmp_path / "pd.csv", tmp_path / "pd.csv")[1].strip() == "0"

    def test_orbit_dataset(self, tmp_path):
        code, out = run("gen-orbit", "--per-class", 2, "--n", 40, "--seed", 0, "--output", tmp_path / "orbits")
        assert code == 0
        assert json.loads(out)["size"] == 10
        dataset = read_dataset(tmp_path / "orbits")
        TopologyAssertions.assert_json_schema(dataset.metadata, DATASET_METADATA_SCHEMA)

    def test_curvature_sample_to_rips_diagram(self, tmp_path):
        args = ("gen-curvature", "--curvature", -1.0, "--n", 40, "--seed", 3, "--output", tmp_path / "dist.csv")
        assert run(*args)[0] == 0
        code, out = run("compute-pd", "rips", tmp_path / "dist.csv", "--max-scale", 1.0, "--output", tmp_path / "pd.csv")
        assert code == 0
        assert all(p.hom_dim == 1 for p in read_diagram(tmp_path / "pd.csv").points)

    def test_graph_diagram(self, tmp_path):
        (tmp_path / "g.json").write_text('{"n_nodes": 3, "edges": [[0, 1], [1, 2], [0, 2]]}')
        code, out = run("compute-pd", "extended-hks", tmp_path / "g.json", "--t", 1.0, "--output", tmp_path / "pd.csv")
        assert code == 0
        assert json.loads(out)["points"] >= 2

    def test_divergence(self, tmp_path):
        code, out = run("divergence", "--n", 30, "--n-seeds", 2, "--seed", 0, "--output", tmp_path / "div.csv")
        assert code == 0
        summary = json.loads(out)
        assert [item["seed"] for item in summary["seeds"]] == [0, 1]
        with (tmp_path / "div.csv").open() as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 60
        assert float(rows[0]["divergence"]) == 0.0


@pytest.mark.cli
class TestExitCodes:
    """Test suite for the mapping of failures to exit codes."""

    def test_help(self):
        assert run("--help")[0] == 0

    def test_missing_arguments(self):
        assert run("distance")[0] == 1

    def test_unknown_command(self):
        assert run("frobnicate")[0] == 1

    def test_missing_file(self, tmp_path):
        assert run("distance", "wp", tmp_path / "nope.csv", tmp_path / "nope.csv")[0] == 1

    def test_invalid_input(self, tmp_path):
        write_point_cloud([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]], tmp_path / "line.csv")
        assert run("compute-pd", "alpha", tmp_path / "line.csv", "--output", tmp_path / "pd.csv")[0] == 1

    def test_size_mismatch_for_wp(self, tmp_path, rng):
        write_diagram(random_diagram(rng, 2), tmp_path / "a.csv")
        write_diagram(random_diagram(rng, 3), tmp_path / "b.csv")
        assert run("distance", "wp", tmp_path / "a.csv", tmp_path / "b.csv")[0] == 1


@pytest.mark.cli
class TestExperimentCommands:
    """Test suite for train, eval, cv, saliency and filter on a toy dataset."""

    @pytest.fixture(autouse=True)
    def setup(self, tmp_path, rng):
        self.tmp = tmp_path
        self.dataset_dir = tmp_path / "toy"
        write_dataset(self.dataset_dir, separable_dataset(rng))
        self.config = tmp_path / "experiment.toml"
        self.config.write_text(TINY_EXPERIMENT)
        self.run_dir = tmp_path / "run"

    def train(self):
        return run(
            "train", "--config", self.config, "--dataset", self.dataset_dir, "--output-dir", self.run_dir, "--seed", 4
        )

    def test_train_writes_run_directory(self):
        code, out = self.train()
        assert code == 0
        summary = json.loads(out)
        TopologyAssertions.assert_json_schema(summary, RUN_SUMMARY_SCHEMA)
        assert summary["epochs"] == 2
        for name in ("model.bin", "model.json", "metrics.csv", "run.json", "config.json"):
            assert (self.run_dir / name).exists(), name
        echo = json.loads((self.run_dir / "config.json").read_text())
        TopologyAssertions.assert_json_schema(echo, CONFIG_ECHO_SCHEMA)
        assert echo["seed"] == 4
        assert len((self.run_dir / "metrics.csv").read_text().splitlines()) == 3

    def test_train_is_reproducible(self):
        self.train()
        first = (self.run_dir / "model.bin").read_bytes()
        self.train()
        assert (self.run_dir / "model.bin").read_bytes() == first

    def test_eval(self):
        self.train()
        code, out = run("eval", "--run", self.run_dir, "--dataset", self.dataset_dir)
        assert code == 0
        result = json.loads(out)
        assert result["n"] == 10
        assert 0.0 <= result["metric"] <= 1.0

    def test_cv(self):
        code, out = run(
            "cv", "--config", self.config, "--dataset", self.dataset_dir, "--folds", 3,
            "--output-dir", self.tmp / "cv", "--seed", 0,
        )
        assert code == 0
        assert len(json.loads(out)["fold_scores"]) == 3
        assert (self.tmp / "cv" / "cv.json").exists()

    def test_saliency_exports(self):
        self.train()
        code, out = run(
            "saliency", "--run", self.run_dir, "--dataset", self.dataset_dir, "--output", self.tmp / "s.csv",
            "--profile", self.tmp / "profile.csv", "--sweep", 0, 50, "--sweep-output", self.tmp / "sweep.csv",
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["diagrams"] == 10
        assert len((self.tmp / "profile.csv").read_text().splitlines()) == 11
        assert len((self.tmp / "sweep.csv").read_text().splitlines()) == 3

    def test_filter(self):
        self.train()
        code, out = run(
            "filter", "--run", self.run_dir, "--dataset", self.dataset_dir, "--percentile", 50,
            "--output", self.tmp / "filtered",
        )
        assert code == 0
        summary = json.loads(out)
        assert 40 <= summary["points_after"] < summary["points_before"]
        assert read_dataset(self.tmp / "filtered").split == read_dataset(self.dataset_dir).split

    def test_invalid_config(self):
        self.config.write_text(TINY_EXPERIMENT.replace("n_heads = 2", "n_heads = 3"))
        assert self.train()[0] == 1


class TestExperimentConfig:
    """Test suite for experiment files and overrides."""

    def test_overrides(self, tmp_path):
        path = tmp_path / "e.toml"
        path.write_text(TINY_EXPERIMENT)
        config = ExperimentConfig.from_file(path, {"optim.total_epochs": 7, "optim.max_lr": None, "seed": 3})
        assert config.optim.total_epochs == 7
        assert config.optim.max_lr == 0.01
        assert config.resolved_seed() == 3
        assert config.resolved_seed(9) == 9

    def test_presets_by_task(self):
        assert ExperimentConfig().network().n_outputs == 5
        regress = ExperimentConfig(task=ExperimentTask.CURVATURE_REGRESS)
        assert regress.network().n_outputs == 1
        assert regress.task.training_task.value == "regression"

    def test_mutag_needs_data(self):
        with pytest.raises(ValueError):
            ExperimentConfig(task=ExperimentTask.MUTAG_CLASSIFY)
