"""Within-leaf spectral invariants: recollision fits, fundamental term, transformed albedo."""

import logging
import math
from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import ConfigurationError, GridError, NumericalError
from ..models.leaf import FundamentalTerm, OpticalConstants, WithinLeafFit, WithinLeafModels
from ..models.spectrum import BandWindow, Spectrum
from ..spectral.core import linear_fit, slice_band

logger = logging.getLogger(__name__)

# Leaves below this chlorophyll content are not green leaves
GREEN_LEAF_MIN_CAB = 10.0
# Upper search bound for the within-leaf recollision probability
P_LEAF_MAX = 0.999


def _window_pair(a: Spectrum, b: Spectrum, w: BandWindow) -> Tuple[np.ndarray, np.ndarray]:
    sa, sb = slice_band(a, w), slice_band(b, w)
    if sa.grid != sb.grid:
        raise GridError(f"spectra disagree on the grid step inside window {w}")
    return sa.values, sb.values


def leaf_invariant_fit(varpi: Spectrum, varpi_r: Spectrum, w: BandWindow = BandWindow()) -> WithinLeafFit:
    """Fit varpi / varpi_r = r + p * varpi over the window."""
    x, ref = _window_pair(varpi, varpi_r, w)
    if np.any(ref <= 0.0):
        raise ConfigurationError(f"reference albedo must be positive over {w}")
    fit = linear_fit(x, x / ref)
    return WithinLeafFit(r=fit.intercept, p=fit.slope, epsilon=fit.intercept + fit.slope - 1.0)


def _check_p_leaf(p_leaf: float) -> None:
    if not 0.0 <= p_leaf < 1.0:
        raise ConfigurationError(f"p_leaf must be in [0, 1), got {p_leaf}")


def fundamental_from_albedo(varpi: Spectrum, p_leaf: float) -> FundamentalTerm:
    """W = varpi / (1 - p_leaf + p_leaf * varpi)."""
    _check_p_leaf(p_leaf)
    v = varpi.values
    if np.any(v <= 0.0) or np.any(v > 1.0):
        raise ConfigurationError("transformed albedo must lie in (0, 1]")
    return FundamentalTerm(varpi.map(lambda a: a / (1.0 - p_leaf + p_leaf * a)), p_leaf)


def albedo_from_fundamental(f: FundamentalTerm) -> Spectrum:
    """varpi = (1 - p_leaf) W / (1 - p_leaf W)."""
    p = f.p_leaf
    return f.w_leaf.map(lambda w: (1.0 - p) * w / (1.0 - p * w))


def power_approx(w_r: Spectrum, t_c: float) -> Spectrum:
    """Approximate W^t_c by (1 - q) W / (1 - q W) with q = (t_c - 1) / t_c."""
    if not t_c > 0.0:
        raise ConfigurationError(f"t_c must be positive, got {t_c}")
    v = w_r.values
    if np.any(v <= 0.0) or np.any(v > 1.0):
        raise ConfigurationError("fundamental term must lie in (0, 1]")
    q = scaled_leaf_recollision(t_c)
    return w_r.map(lambda w: (1.0 - q) * w / (1.0 - q * w))


def scaled_leaf_recollision(t: float) -> float:
    """q(t) = (t - 1) / t, the recollision of a leaf with t times the reference pigments."""
    return (t - 1.0) / t


def within_leaf_models(cab: float, lma: float) -> WithinLeafModels:
    """Closed-form within-leaf recollision relations for a green leaf."""
    if not cab >= GREEN_LEAF_MIN_CAB:
        raise ConfigurationError(
            f"cab {cab} ug/cm2 is below the green-leaf floor {GREEN_LEAF_MIN_CAB}"
        )
    return WithinLeafModels(
        p0=1.04 - 15.54 / cab,
        p=1.04 - 16.63 / cab,
        r=15.07 / cab - 0.02,
        k_line=9.18 * lma + 0.98,
        b_line=-9.16 * lma + 0.02,
    )


def transformed_coefficients(t_c: float, t_m: float, cm_km: float, p_leaf: float) -> Tuple[float, float, float]:
    """(A, q, B) of a leaf whose chlorophyll and dry matter are t_c and t_m times the reference."""
    if not (t_c > 0.0 and t_m > 0.0):
        raise ConfigurationError(f"t_c and t_m must be positive, got {t_c}, {t_m}")
    _check_p_leaf(p_leaf)
    a = math.exp((t_c - t_m) * cm_km)
    q = scaled_leaf_recollision(t_c)
    b = (q - p_leaf + p_leaf * a * (1.0 - q)) / (1.0 - p_leaf)
    return a, q, b


def transformed_albedo_model(
    varpi_r: Spectrum, t_c: float, t_m: float, cm_km: float, p_leaf: float
) -> Spectrum:
    """varpi = A (1 - q) varpi_r / (1 - B varpi_r)."""
    a, q, b = transformed_coefficients(t_c, t_m, cm_km, p_leaf)
    if np.any(b * varpi_r.values >= 1.0):
        raise NumericalError(f"B * varpi_r reaches 1 (B = {b:.6g}); non-physical leaf")
    return varpi_r.map(lambda v: a * (1.0 - q) * v / (1.0 - b * v))


def albedo_with_surface(varpi: Spectrum, s_l: float) -> Spectrum:
    """Leaf albedo including surface reflection: s_L + (1 - s_L) varpi."""
    _check_surface(s_l)
    return varpi.map(lambda v: s_l + (1.0 - s_l) * v)


def transformed_from_albedo(omega: Spectrum, s_l: float) -> Spectrum:
    """Inverse of albedo_with_surface."""
    _check_surface(s_l)
    return omega.map(lambda w: (w - s_l) / (1.0 - s_l))


def _check_surface(s_l: float) -> None:
    if not 0.0 <= s_l <= 0.05:
        raise ConfigurationError(f"surface fraction must be in [0, 0.05], got {s_l}")


def fit_p_leaf(varpi: Spectrum, oc: OpticalConstants, w: BandWindow = BandWindow()) -> float:
    """
    Within-leaf recollision probability of a simulated leaf.

    Picks p_leaf in [0, 0.999] so that ln W_leaf is best explained by a
    line in the chlorophyll absorption coefficient across the window.
    """
    band = slice_band(varpi, w)
    k_band = slice_band(Spectrum(oc.grid, oc.k_cab), w)
    if band.grid != k_band.grid:
        raise GridError("albedo and constants grids differ inside the window")
    design = np.column_stack([k_band.values, np.ones(len(k_band))])

    def residual(p_leaf: float) -> float:
        ln_w = np.log(fundamental_from_albedo(band, p_leaf).w_leaf.values)
        coef, *_ = np.linalg.lstsq(design, ln_w, rcond=None)
        r = ln_w - design @ coef
        return float(r @ r)

    result = minimize_scalar(residual, bounds=(0.0, P_LEAF_MAX), method="bounded",
                             options={"xatol": 1e-10})
    logger.debug("Fitted p_leaf = %.6f (residual %.3g)", result.x, result.fun)
    return float(result.x)
