"""Spectral-invariant canopy forward model over a non-reflecting background."""

import numpy as np

from ..errors import NumericalError
from ..models.canopy import SIForwardParams
from ..models.spectrum import Spectrum


def si_forward_brf(params: SIForwardParams, omega: Spectrum) -> Spectrum:
    """BRF = rho_i0 * omega / (1 - p * omega), evaluated pointwise."""
    denom = 1.0 - params.p * omega.values
    if np.any(denom <= 0.0):
        raise NumericalError(
            f"1 - p * omega reaches {denom.min():.3g} (p = {params.p}, max omega = {omega.values.max():.6g})"
        )
    return Spectrum(omega.grid, params.rho_i0 * omega.values / denom)


def canopy_scattering_coefficient(omega: Spectrum, p: float) -> Spectrum:
    """Canopy scattering coefficient (1 - p) omega / (1 - p omega)."""
    if not 0.0 <= p < 1.0:
        raise NumericalError(f"recollision probability must be in [0, 1), got {p}")
    denom = 1.0 - p * omega.values
    if np.any(denom <= 0.0):
        raise NumericalError("1 - p * omega must stay positive")
    return Spectrum(omega.grid, (1.0 - p) * omega.values / denom)
