"""Two-parameter leaf inclination distribution over the 13 SAIL classes."""

import math

import numpy as np
from numpy.typing import NDArray

from ..models.canopy import check_lidf_parameters

# Upper edges of the inclination classes: 10 degree bins to 80, then 2 degree bins
CLASS_EDGES_DEG = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 82.0, 84.0, 86.0, 88.0, 90.0)
CLASS_CENTRES_DEG = (5.0, 15.0, 25.0, 35.0, 45.0, 55.0, 65.0, 75.0, 81.0, 83.0, 85.0, 87.0, 89.0)
N_CLASSES = len(CLASS_EDGES_DEG)

_TOLERANCE = 1e-8


def cumulative_inclination(a: float, b: float, theta_deg: float) -> float:
    """Fraction of leaf area inclined below theta_deg."""
    p = 2.0 * math.radians(theta_deg)
    x = p
    delx = 1.0
    y = 0.0
    while delx >= _TOLERANCE:
        y = a * math.sin(x) + 0.5 * b * math.sin(2.0 * x)
        dx = 0.5 * (y - x + p)
        x += dx
        delx = abs(dx)
    return (2.0 * y + p) / math.pi


def lidf_density(a: float, b: float) -> NDArray[np.float64]:
    """
    Leaf-area fraction in each inclination class.

    Args:
        a: Average-slope parameter
        b: Bimodality parameter; |a| + |b| <= 1

    Returns:
        13 nonnegative fractions summing to 1
    """
    check_lidf_parameters(a, b)
    cumulative = [0.0] + [cumulative_inclination(a, b, edge) for edge in CLASS_EDGES_DEG[:-1]] + [1.0]
    density = np.diff(np.asarray(cumulative))
    # truncation error of the iteration can leave tiny negatives at the class edges
    density = np.clip(density, 0.0, None)
    return density / density.sum()
