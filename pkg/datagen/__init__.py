"""
Synthetic data (orbits, constant-curvature discs) and graph dataset ingestion.
"""
from .curvature import analytic_mean_radius, geodesic_distances, sample_constant_curvature_disc
from .models import ORBIT_RHOS, CurvatureSampleSpec, LabeledGraphSet, OrbitSpec, Precision
from .mutag import load_mutag
from .orbits import generate_orbit, orbit_divergence_study, torus_distance
from .services import DataGenService, generate_orbit_dataset

__all__ = [
    "ORBIT_RHOS",
    "CurvatureSampleSpec",
    "DataGenService",
    "LabeledGraphSet",
    "OrbitSpec",
    "Precision",
    "analytic_mean_radius",
    "generate_orbit",
    "generate_orbit_dataset",
    "geodesic_distances",
    "load_mutag",
    "orbit_divergence_study",
    "sample_constant_curvature_disc",
    "torus_distance",
]
