"""
Generalized plate model of leaf reflectance and transmittance.

A leaf is a stack of N homogeneous absorbing plates: the first plate sees
light within a 40 degree solid angle, the remaining N-1 are combined with
Stokes' pile-of-plates relations.
"""

import logging

import numpy as np
from numpy.typing import NDArray
from scipy.special import exp1

from ..errors import NumericalError
from ..models.leaf import CONSTITUENTS, REFERENCE_BIOCHEM, LeafBiochem, LeafOptics, OpticalConstants
from ..models.spectrum import Spectrum

logger = logging.getLogger(__name__)

# Incidence solid angle at the top leaf surface (degrees)
SURFACE_ANGLE_DEG = 40.0


def tav(theta_deg: float, n: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Average transmissivity of a dielectric interface for isotropic light
    within a solid angle of half-width theta_deg.

    Args:
        theta_deg: Half-angle of the incidence cone (degrees, 0 < theta <= 90)
        n: Refractive index

    Returns:
        Average transmissivity per wavelength
    """
    theta = np.radians(theta_deg)
    n = np.asarray(n, dtype=np.float64)
    r2 = n ** 2
    rp = r2 + 1.0
    rm = r2 - 1.0
    a = (n + 1.0) ** 2 / 2.0
    k = -(r2 - 1.0) ** 2 / 4.0
    ds = np.sin(theta)

    if theta_deg == 90.0:
        b1 = np.zeros_like(n)
    else:
        b1 = np.sqrt((ds ** 2 - rp / 2.0) ** 2 + k)
    k2 = k ** 2
    rm2 = rm ** 2
    b2 = ds ** 2 - rp / 2.0
    b = b1 - b2

    ts = (k2 / (6.0 * b ** 3) + k / b - b / 2.0) - (k2 / (6.0 * a ** 3) + k / a - a / 2.0)
    tp1 = -2.0 * r2 * (b - a) / rp ** 2
    tp2 = -2.0 * r2 * rp * np.log(b / a) / rm2
    tp3 = r2 * (1.0 / b - 1.0 / a) / 2.0
    tp4 = (16.0 * r2 ** 2 * (r2 ** 2 + 1.0)
           * np.log((2.0 * rp * b - rm2) / (2.0 * rp * a - rm2)) / (rp ** 3 * rm2))
    tp5 = 16.0 * r2 ** 3 * (1.0 / (2.0 * rp * b - rm2) - 1.0 / (2.0 * rp * a - rm2)) / rp ** 3
    return (ts + tp1 + tp2 + tp3 + tp4 + tp5) / (2.0 * ds ** 2)


def plate_transmissivity(k: NDArray[np.float64]) -> NDArray[np.float64]:
    """Diffuse transmissivity of one plate: (1 - k) exp(-k) + k^2 E1(k)."""
    k = np.asarray(k, dtype=np.float64)
    trans = np.ones_like(k)
    absorbing = k > 0.0
    ka = k[absorbing]
    e1 = exp1(ka)
    if not np.all(np.isfinite(e1)):
        raise NumericalError("exponential integral evaluation failed")
    values = (1.0 - ka) * np.exp(-ka) + ka ** 2 * e1
    if np.any(values < -1e-12) or not np.all(np.isfinite(values)):
        raise NumericalError("plate transmissivity out of range")
    # rounding-level negatives only occur for fully opaque plates
    trans[absorbing] = np.maximum(values, 0.0)
    return trans


def _single_layer(n: NDArray[np.float64], tau: NDArray[np.float64]):
    """Top-plate (ra, ta) and inner-plate (r, t) reflectance and transmittance."""
    talf = tav(SURFACE_ANGLE_DEG, n)
    ralf = 1.0 - talf
    t12 = tav(90.0, n)
    r12 = 1.0 - t12
    t21 = t12 / n ** 2
    r21 = 1.0 - t21

    denom = 1.0 - r21 ** 2 * tau ** 2
    ta = talf * tau * t21 / denom
    ra = ralf + r21 * tau * ta
    t = t12 * tau * t21 / denom
    r = r12 + r21 * tau * t
    return r, t, ra, ta


def _stack(r, t, ra, ta, n_struct: float):
    """Combine the top plate with N-1 inner plates."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        d = np.sqrt(np.maximum((1.0 + r + t) * (1.0 + r - t) * (1.0 - r + t) * (1.0 - r - t), 0.0))
        a = (1.0 + r ** 2 - t ** 2 + d) / (2.0 * r)
        b = (1.0 - r ** 2 + t ** 2 + d) / (2.0 * t)
        # u = b^-(N-1) stays in [0, 1] and underflows cleanly for opaque plates
        u = np.power(b, -(n_struct - 1.0))
        a2 = a ** 2
        denom = a2 - u ** 2
        rsub = a * (1.0 - u ** 2) / denom
        tsub = u * (a2 - 1.0) / denom

    # zero absorption
    lossless = r + t >= 1.0 - 1e-12
    if np.any(lossless):
        tl = t[lossless]
        tsub[lossless] = tl / (tl + (1.0 - tl) * (n_struct - 1.0))
        rsub[lossless] = 1.0 - tsub[lossless]

    denom = 1.0 - rsub * r
    tran = ta * tsub / denom
    refl = ra + ta * rsub * t / denom
    return refl, tran


def prospect(bio: LeafBiochem, oc: OpticalConstants, surface_fraction: float = 0.0) -> LeafOptics:
    """Leaf reflectance, transmittance and albedo for a biochemistry."""
    k = sum(getattr(bio, name) * oc.coefficient(name) for name in CONSTITUENTS) / bio.n_struct
    tau = plate_transmissivity(k)
    r, t, ra, ta = _single_layer(oc.n, tau)
    refl, tran = _stack(r, t, ra, ta, bio.n_struct)
    if not (np.all(np.isfinite(refl)) and np.all(np.isfinite(tran))):
        raise NumericalError(f"plate model produced non-finite values for {bio}")
    return LeafOptics.from_rt(
        Spectrum(oc.grid, refl), Spectrum(oc.grid, tran), surface_fraction=surface_fraction
    )


def reference_albedo(oc: OpticalConstants) -> Spectrum:
    """Albedo of the reference leaf (Cab 16 ug/cm2, EWT 0.005 cm, LMA 0.002 g/cm2, N 1.5)."""
    return prospect(REFERENCE_BIOCHEM, oc).albedo
