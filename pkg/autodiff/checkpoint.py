"""
Parameter checkpoints: a flat little-endian float64 file plus a JSON sidecar.

    <stem>.bin   all parameters concatenated in sidecar order
    <stem>.json  {"dtype": "<f8", "parameters": {name: {"offset": int, "shape": [int]}}}

Offsets count float64 elements from the start of the binary file.
"""
import json
import logging
import math
from pathlib import Path
from typing import Dict, Mapping, Tuple, Union

import numpy as np
from jsonschema import ValidationError, validate

from .exceptions import CheckpointError
from .tensor import Tensor

logger = logging.getLogger(__name__)

CHECKPOINT_DTYPE = "<f8"

SIDECAR_SCHEMA = {
    "type": "object",
    "required": ["dtype", "parameters"],
    "properties": {
        "dtype": {"const": CHECKPOINT_DTYPE},
        "parameters": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["offset", "shape"],
                "properties": {
                    "offset": {"type": "integer", "minimum": 0},
                    "shape": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                },
            },
        },
    },
}


def checkpoint_paths(stem: Union[str, Path]) -> Tuple[Path, Path]:
    stem = Path(stem)
    return stem.with_suffix(".bin"), stem.with_suffix(".json")


def save_parameters(parameters: Mapping[str, Union[Tensor, np.ndarray]], stem: Union[str, Path]) -> Path:
    """Write parameters in mapping order; returns the sidecar path."""
    bin_path, json_path = checkpoint_paths(stem)
    bin_path.parent.mkdir(parents=True, exist_ok=True)
    entries = {}
    offset = 0
    with bin_path.open("wb") as handle:
        for name, value in parameters.items():
            array = value.data if isinstance(value, Tensor) else np.asarray(value)
            handle.write(np.ascontiguousarray(array, dtype=CHECKPOINT_DTYPE).tobytes())
            entries[name] = {"offset": offset, "shape": list(array.shape)}
            offset += array.size
    json_path.write_text(
        json.dumps({"dtype": CHECKPOINT_DTYPE, "parameters": entries}, indent=2) + "\n"
    )
    logger.info(f"Saved {len(entries)} parameters ({offset} values) to {bin_path}")
    return json_path


def load_parameters(stem: Union[str, Path]) -> Dict[str, np.ndarray]:
    """Read a checkpoint back as float64 arrays keyed by parameter name."""
    bin_path, json_path = checkpoint_paths(stem)
    if not bin_path.exists() or not json_path.exists():
        raise CheckpointError(f"Checkpoint {bin_path.with_suffix('')} needs both .bin and .json files")
    try:
        sidecar = json.loads(json_path.read_text())
        validate(instance=sidecar, schema=SIDECAR_SCHEMA)
    except (json.JSONDecodeError, ValidationError) as exc:
        raise CheckpointError(f"{json_path}: invalid sidecar: {exc}") from exc
    flat = np.fromfile(bin_path, dtype=CHECKPOINT_DTYPE)
    parameters = {}
    for name, entry in sidecar["parameters"].items():
        start = entry["offset"]
        count = math.prod(entry["shape"])
        if start + count > flat.size:
            raise CheckpointError(f"{name} runs past the end of {bin_path}")
        parameters[name] = flat[start:start + count].reshape(entry["shape"]).astype(np.float64)
    return parameters
