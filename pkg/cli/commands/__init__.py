"""
Registry of subcommands, keyed by their command-line name.
"""
from importlib import import_module

COMMAND_MODULES = {
    "gen-orbit": "gen_orbit",
    "gen-curvature": "gen_curvature",
    "compute-pd": "compute_pd",
    "distance": "distance",
    "train": "train",
    "eval": "eval",
    "cv": "cv",
    "saliency": "saliency",
    "filter": "filter",
    "divergence": "divergence",
}


def load_command_class(name: str):
    return import_module(f"{__name__}.{COMMAND_MODULES[name]}").Command
