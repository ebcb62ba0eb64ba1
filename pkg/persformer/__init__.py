"""
Permutation-invariant transformer over persistence diagrams.
"""
from .models import Activation, ModelState, PersformerConfig, Pooling
from .network import Persformer, attention_scores, deep_sets_mode, init_state
from .serializers import load_model, save_model

__all__ = [
    "Activation",
    "ModelState",
    "Persformer",
    "PersformerConfig",
    "Pooling",
    "attention_scores",
    "deep_sets_mode",
    "init_state",
    "load_model",
    "save_model",
]
