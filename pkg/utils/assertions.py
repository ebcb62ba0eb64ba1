"""
Common assertions and JSON schemas for toolkit tests.
"""
import math
from collections import Counter
from typing import Any, Dict, Iterable, Sequence

import jsonschema
import numpy as np
import pytest

from autodiff.checkpoint import SIDECAR_SCHEMA
from diagrams.models import PersistenceDiagram


class TopologyAssertions:
    """Collection of assertions shared by the test modules."""

    @staticmethod
    def assert_same_diagram(first: PersistenceDiagram, second: PersistenceDiagram, digits: int = 12):
        """Assert two diagrams hold the same multiset of points (labels ignored)."""

        def multiset(diagram: PersistenceDiagram) -> Counter:
            return Counter(
                (round(p.birth, digits), round(p.death, digits), p.hom_dim, p.ext_type) for p in diagram.points
            )

        left, right = multiset(first), multiset(second)
        assert left == right, (
            f"Diagrams differ: only in first {sorted(left - right)[:5]}, only in second {sorted(right - left)[:5]}"
        )

    @staticmethod
    def assert_close(actual, expected, rtol: float = 0.0, atol: float = 1e-12, what: str = "value"):
        actual, expected = np.asarray(actual, dtype=np.float64), np.asarray(expected, dtype=np.float64)
        assert actual.shape == expected.shape, f"{what}: shape {actual.shape} != {expected.shape}"
        assert np.allclose(actual, expected, rtol=rtol, atol=atol), (
            f"{what}: max abs difference {np.max(np.abs(actual - expected)) if actual.size else 0:.3e} "
            f"exceeds atol={atol}, rtol={rtol}"
        )

    @staticmethod
    def assert_relative_error(actual, expected, tolerance: float, floor: float = 1e-8, what: str = "gradient"):
        """max |a - e| / max(|e|, floor) over all entries."""
        actual, expected = np.asarray(actual, dtype=np.float64), np.asarray(expected, dtype=np.float64)
        error = np.max(np.abs(actual - expected) / np.maximum(np.abs(expected), floor)) if actual.size else 0.0
        assert error < tolerance, f"{what}: relative error {error:.3e} >= {tolerance}"

    @staticmethod
    def assert_json_schema(document: Dict[str, Any], schema: Dict[str, Any]):
        try:
            jsonschema.validate(instance=document, schema=schema)
        except jsonschema.ValidationError as e:
            pytest.fail(f"JSON schema validation failed: {e.message}")

    @staticmethod
    def assert_nonincreasing(values: Sequence[float], what: str = "sequence", slack: float = 0.0):
        for index, (before, after) in enumerate(zip(values, values[1:])):
            assert after <= before + slack, f"{what} increases at position {index + 1}: {before} -> {after}"

    @staticmethod
    def assert_finite(values: Iterable[float], what: str = "values"):
        bad = [v for v in values if not math.isfinite(v)]
        assert not bad, f"{what} contain non-finite entries {bad[:5]}"


CHECKPOINT_SIDECAR_SCHEMA = SIDECAR_SCHEMA

DATASET_METADATA_SCHEMA = {
    "type": "object",
    "required": ["task", "max_hom_dim", "use_ext_types", "n_classes", "seed"],
    "properties": {
        "task": {"enum": ["orbit_classify", "mutag_classify", "curvature_regress"]},
        "max_hom_dim": {"type": "integer", "minimum": 0},
        "use_ext_types": {"type": "boolean"},
        "n_classes": {"type": "integer", "minimum": 0},
        "class_rhos": {"type": "object", "additionalProperties": {"type": "number"}},
        "seed": {"type": "integer"},
    },
}

CONFIG_ECHO_SCHEMA = {
    "type": "object",
    "required": ["task", "dataset", "model", "optim", "seed", "output_dir"],
    "properties": {
        "task": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "model": {
            "type": "object",
            "required": ["input_dim", "hidden_dim", "n_layers", "n_heads", "decoder_layers"],
        },
        "optim": {"type": "object", "required": ["max_lr", "batch_size", "total_epochs"]},
    },
}

RUN_SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["task", "seed", "epochs", "best_epoch", "best_metric", "lr"],
    "properties": {
        "task": {"enum": ["classification", "regression"]},
        "epochs": {"type": "integer", "minimum": 1},
        "best_epoch": {"type": "integer", "minimum": 0},
        "lr": {"type": "array", "items": {"type": "number"}},
    },
}
