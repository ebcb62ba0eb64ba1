"""
Gradient saliency maps, saliency-guided filtering and lifetime-bin profiles.
"""
from .models import BinProfile, SaliencyScores, SaliencyTarget
from .serializers import read_saliency, write_bin_profile, write_saliency, write_sweep
from .services import InterpretService, percentile_filter, saliency, saliency_bin_profile

__all__ = [
    "BinProfile",
    "InterpretService",
    "SaliencyScores",
    "SaliencyTarget",
    "percentile_filter",
    "read_saliency",
    "saliency",
    "saliency_bin_profile",
    "write_bin_profile",
    "write_saliency",
    "write_sweep",
]
