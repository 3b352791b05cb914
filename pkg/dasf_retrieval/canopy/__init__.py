"""Canopy forward models: four-stream turbid medium and the spectral-invariant oracle."""

from .lidf import CLASS_CENTRES_DEG, CLASS_EDGES_DEG, N_CLASSES, cumulative_inclination, lidf_density
from .sail import canopy_brf, canopy_geometry, four_stream, non_absorbing_brf, volscatt
from .invariant_model import canopy_scattering_coefficient, si_forward_brf

__all__ = [
    "CLASS_CENTRES_DEG",
    "CLASS_EDGES_DEG",
    "N_CLASSES",
    "cumulative_inclination",
    "lidf_density",
    "canopy_brf",
    "canopy_geometry",
    "four_stream",
    "non_absorbing_brf",
    "volscatt",
    "canopy_scattering_coefficient",
    "si_forward_brf",
]
