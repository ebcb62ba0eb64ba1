"""
Orbits of the linked twist map on the unit torus.

    x_{n+1} = x_n + rho * y_n * (1 - y_n)          mod 1
    y_{n+1} = y_n + rho * x_{n+1} * (1 - x_{n+1})  mod 1

The initial point is drawn from numpy's PCG64 generator seeded with the spec
seed (``default_rng(seed).random(2)``, 53-bit uniform doubles) and is the first
point of the orbit.
"""
import logging
import math
from decimal import Decimal, localcontext
from typing import List, Tuple

import numpy as np

from config import settings

from .exceptions import GuardExceeded
from .models import OrbitSpec, Precision

logger = logging.getLogger(__name__)

# Decimal digits for the first arbitrary-precision attempt, and the ceiling.
START_DIGITS = 64
MAX_DIGITS = 1 << 14


def initial_point(seed: int) -> Tuple[float, float]:
    x0, y0 = np.random.default_rng(seed).random(2)
    return float(x0), float(y0)


def orbit_from_initial_point(x0: float, y0: float, rho: float, n_points: int) -> np.ndarray:
    """Float64 orbit of n_points points starting at (x0, y0)."""
    points = np.empty((n_points, 2), dtype=np.float64)
    x, y = float(x0), float(y0)
    for k in range(n_points):
        points[k] = (x, y)
        x = (x + rho * y * (1.0 - y)) % 1.0
        y = (y + rho * x * (1.0 - x)) % 1.0
    return points


def _decimal_orbit(x0: float, y0: float, rho: float, n_points: int, digits: int) -> List[Tuple[Decimal, Decimal]]:
    with localcontext() as ctx:
        ctx.prec = digits
        one = Decimal(1)
        r = Decimal(rho)
        x, y = Decimal(x0), Decimal(y0)
        orbit = []
        for _ in range(n_points):
            orbit.append((x, y))
            x = (x + r * y * (one - y)) % one
            y = (y + r * x * (one - x)) % one
    return orbit


def _rounded(orbit: List[Tuple[Decimal, Decimal]]) -> np.ndarray:
    return np.array([[float(x), float(y)] for x, y in orbit], dtype=np.float64)


def arbitrary_precision_orbit(x0: float, y0: float, rho: float, n_points: int) -> np.ndarray:
    """
    Orbit computed in decimal arithmetic, rounded to float64.

    The working precision is doubled until doubling it again leaves every rounded
    point unchanged. The float64 initial point and rho are converted exactly, so
    both arithmetics start from the same numbers.
    """
    digits = START_DIGITS
    current = _rounded(_decimal_orbit(x0, y0, rho, n_points, digits))
    while digits < MAX_DIGITS:
        refined = _rounded(_decimal_orbit(x0, y0, rho, n_points, 2 * digits))
        if np.array_equal(current, refined):
            logger.debug(f"Orbit of {n_points} points stable at {digits} digits")
            return current
        digits *= 2
        current = refined
    logger.warning(f"Orbit did not stabilize below {MAX_DIGITS} digits; using the last refinement")
    return current


def generate_orbit(spec: OrbitSpec) -> np.ndarray:
    """Point cloud [n_points, 2] in [0, 1)^2, a pure function of the spec."""
    x0, y0 = initial_point(spec.seed)
    if spec.precision is Precision.ARBITRARY:
        return arbitrary_precision_orbit(x0, y0, spec.rho, spec.n_points)
    return orbit_from_initial_point(x0, y0, spec.rho, spec.n_points)


def torus_distance(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Row-wise Euclidean distance in the quotient [0, 1)^2 / Z^2."""
    delta = np.abs(np.asarray(first) - np.asarray(second))
    delta = np.minimum(delta, 1.0 - delta)
    return np.sqrt(np.sum(delta ** 2, axis=-1))


def orbit_divergence_study(rho: float, seed: int, n: int) -> List[Tuple[int, float]]:
    """
    Divergence between the float64 orbit and the arbitrary-precision orbit.

    Returns:
        (step, torus distance) for steps 0..n-1

    Raises:
        GuardExceeded: if n exceeds settings.divergence_max_steps
    """
    if n > settings.divergence_max_steps:
        raise GuardExceeded(
            f"Divergence study of {n} steps exceeds the guard of {settings.divergence_max_steps}"
        )
    if n < 1:
        return []
    x0, y0 = initial_point(seed)
    floating = orbit_from_initial_point(x0, y0, rho, n)
    reference = arbitrary_precision_orbit(x0, y0, rho, n)
    divergence = torus_distance(floating, reference)
    logger.info(
        f"Divergence study rho={rho} seed={seed}: final divergence {divergence[-1]:.3e}"
    )
    return [(step, float(value)) for step, value in enumerate(divergence)]


def log_slope(study: List[Tuple[int, float]], low: float = 1e-14, high: float = 1e-2) -> float:
    """Least-squares slope of log(divergence) over the steps inside (low, high)."""
    window = [(step, math.log(value)) for step, value in study if low < value < high]
    if len(window) < 2:
        return math.nan
    steps, logs = np.array(window).T
    slope, _ = np.polyfit(steps, logs, 1)
    return float(slope)


def first_step_above(study: List[Tuple[int, float]], threshold: float) -> int:
    """First step whose divergence exceeds the threshold, or -1."""
    return next((step for step, value in study if value > threshold), -1)
