"""
Uniform samples of the geodesic unit disc on surfaces of constant curvature K,
with intrinsic (geodesic) distance matrices.

K > 0 is a spherical cap, K = 0 the flat disc and K < 0 a hyperbolic disc.
With s = sqrt(|K|), the radial density of the area element is proportional to
sin(s r), r or sinh(s r) on [0, 1].
"""
import logging
import math
from typing import Tuple

import numpy as np
from scipy import integrate

from .exceptions import InvalidCurvatureRadius
from .models import CurvatureSampleSpec

logger = logging.getLogger(__name__)


def _check_curvature(curvature: float) -> None:
    if not math.isfinite(curvature):
        raise InvalidCurvatureRadius(f"Curvature must be finite, got {curvature}")
    if curvature >= math.pi ** 2:
        raise InvalidCurvatureRadius(
            f"A geodesic disc of radius 1 does not fit on a sphere with K={curvature} >= pi^2"
        )


def radial_quantile(u: np.ndarray, curvature: float) -> np.ndarray:
    """Inverse CDF of the geodesic radius, in half-angle form."""
    u = np.asarray(u, dtype=np.float64)
    if curvature > 0:
        s = math.sqrt(curvature)
        return 2.0 / s * np.arcsin(np.sqrt(u) * math.sin(s / 2.0))
    if curvature < 0:
        s = math.sqrt(-curvature)
        return 2.0 / s * np.arcsinh(np.sqrt(u) * math.sinh(s / 2.0))
    return np.sqrt(u)


def sample_disc_polar(curvature: float, n_points: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Geodesic polar coordinates (radius, angle) of a uniform sample."""
    _check_curvature(curvature)
    rng = np.random.default_rng(seed)
    radius = radial_quantile(rng.random(n_points), curvature)
    angle = rng.uniform(0.0, 2.0 * math.pi, n_points)
    return radius, angle


def geodesic_distances(curvature: float, radius: np.ndarray, angle: np.ndarray) -> np.ndarray:
    """
    Pairwise geodesic distances between points given in geodesic polar coordinates.

    Haversine forms of the laws of cosines:
        K > 0:  sin^2(s d/2)  = sin^2(s dr/2)  + sin(s r1) sin(s r2) sin^2(dtheta/2)
        K < 0:  sinh^2(s d/2) = sinh^2(s dr/2) + sinh(s r1) sinh(s r2) sin^2(dtheta/2)
        K = 0:  d^2 = dr^2 + 4 r1 r2 sin^2(dtheta/2)
    """
    _check_curvature(curvature)
    r = np.asarray(radius, dtype=np.float64)
    theta = np.asarray(angle, dtype=np.float64)
    dr = r[:, None] - r[None, :]
    angular = np.sin((theta[:, None] - theta[None, :]) / 2.0) ** 2

    if curvature > 0:
        s = math.sqrt(curvature)
        h = np.sin(s * dr / 2.0) ** 2 + np.outer(np.sin(s * r), np.sin(s * r)) * angular
        dist = 2.0 / s * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))
    elif curvature < 0:
        s = math.sqrt(-curvature)
        h = np.sinh(s * dr / 2.0) ** 2 + np.outer(np.sinh(s * r), np.sinh(s * r)) * angular
        dist = 2.0 / s * np.arcsinh(np.sqrt(np.maximum(h, 0.0)))
    else:
        dist = np.sqrt(np.maximum(dr ** 2 + 4.0 * np.outer(r, r) * angular, 0.0))

    upper = np.triu(dist, 1)
    return upper + upper.T


def sample_constant_curvature_disc(spec: CurvatureSampleSpec) -> np.ndarray:
    """Symmetric [n, n] geodesic distance matrix of a uniform disc sample."""
    radius, angle = sample_disc_polar(spec.curvature, spec.n_points, spec.seed)
    return geodesic_distances(spec.curvature, radius, angle)


def radial_density(r: float, curvature: float) -> float:
    """Unnormalized density of the geodesic radius."""
    if curvature > 0:
        s = math.sqrt(curvature)
        return math.sin(s * r) / s
    if curvature < 0:
        s = math.sqrt(-curvature)
        return math.sinh(s * r) / s
    return r


def analytic_mean_radius(curvature: float) -> float:
    _check_curvature(curvature)
    mass, _ = integrate.quad(radial_density, 0.0, 1.0, args=(curvature,))
    moment, _ = integrate.quad(lambda r: r * radial_density(r, curvature), 0.0, 1.0)
    return moment / mass
