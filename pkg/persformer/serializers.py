"""
Saving and loading trained models: parameter checkpoint plus config document.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Union

from autodiff.checkpoint import load_parameters, save_parameters
from autodiff.exceptions import CheckpointError

from .models import ModelState, PersformerConfig
from .network import Persformer

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

MODEL_STEM = "model"
MODEL_CONFIG = "model_config.json"


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    """Parse a TOML or JSON document by file extension."""
    path = Path(path)
    if path.suffix == ".toml":
        with path.open("rb") as handle:
            return tomllib.load(handle)
    return json.loads(path.read_text())


def save_model(model: Persformer, directory: Union[str, Path]) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_parameters(model.state.parameters, directory / MODEL_STEM)
    (directory / MODEL_CONFIG).write_text(model.config.model_dump_json(indent=2) + "\n")
    return directory


def load_model(directory: Union[str, Path]) -> Persformer:
    """Rebuild a model from a run directory written by save_model."""
    directory = Path(directory)
    config_path = directory / MODEL_CONFIG
    if not config_path.exists():
        raise CheckpointError(f"No {MODEL_CONFIG} in {directory}")
    config = PersformerConfig.model_validate_json(config_path.read_text())
    arrays = load_parameters(directory / MODEL_STEM)
    model = Persformer(config, seed=0)
    expected = {name: tensor.shape for name, tensor in model.state.items()}
    found = {name: array.shape for name, array in arrays.items()}
    if expected != found:
        missing = sorted(set(expected) ^ set(found))
        raise CheckpointError(f"Checkpoint does not match the config (differs at {missing[:5] or 'shapes'})")
    model.state = ModelState.from_arrays({name: arrays[name] for name in expected})
    logger.info(f"Loaded model with {model.state.n_values()} parameters from {directory}")
    return model
