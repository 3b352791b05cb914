"""
Spectral-invariant DASF estimators.

BRF/albedo is regressed on BRF over the red-edge/NIR window; the
intercept b and slope k give DASF = b / (1 - k). The improved estimator
subtracts a modelled dry-matter bias DC from the denominator.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..errors import ConfigurationError, EstimatorError, GridError
from ..models.canopy import DASF_SOFT_BOUND
from ..models.estimates import (
    DEFAULT_DC_COEFFICIENTS, AlbedoReference, DasfEstimate, DasfRegression,
    DcModelCoefficients, EstimateMethod,
)
from ..models.spectrum import BandWindow, Spectrum
from ..processing.batch import BatchProcessor, BatchResult
from ..spectral.core import at, linear_fit, slice_band
from .bias import dc_model

logger = logging.getLogger(__name__)

# Bands feeding the DC model
DC_BANDS_NM = (710, 2260)
K_GUARD = 1e-9
DENOMINATOR_GUARD = 1e-6


def regress_brf(
    brf: Spectrum,
    albedo: Spectrum,
    w: BandWindow = BandWindow(),
    reference: AlbedoReference = AlbedoReference.REFERENCE_ALBEDO,
) -> DasfRegression:
    """
    Fit BRF/albedo = k * BRF + b over the window.

    BRF and albedo may live on different grids as long as both cover the
    window with the same step.
    """
    x_band, a_band = slice_band(brf, w), slice_band(albedo, w)
    if x_band.grid != a_band.grid:
        raise GridError(f"BRF and albedo are sampled differently inside window {w}")
    x, a = x_band.values, a_band.values
    if np.any(a <= 0.0):
        raise ConfigurationError(f"albedo must be positive over window {w}")
    fit = linear_fit(x, x / a)
    return DasfRegression(k=fit.slope, b=fit.intercept, r2=fit.r2, n=fit.n, window=w, reference=reference)


def _diagnostics(reg: DasfRegression, dc: float = 0.0) -> Dict[str, float]:
    diag = {"k": reg.k, "b": reg.b, "r2": reg.r2, "dc": dc}
    if 1.0 - reg.k > K_GUARD:
        diag["sdasf"] = reg.b / (1.0 - reg.k)
    return diag


def _check_value(value: float, method: EstimateMethod, reg: DasfRegression, dc: float) -> float:
    if not math.isfinite(value):
        raise EstimatorError(f"{method.value} is not finite", _diagnostics(reg, dc))
    if not 0.0 < value <= DASF_SOFT_BOUND:
        logger.warning("%s = %.4f outside the physical range (0, %.1f]", method.value, value, DASF_SOFT_BOUND)
    return value


def _from_regression(reg: DasfRegression, method: EstimateMethod) -> DasfEstimate:
    if 1.0 - reg.k <= K_GUARD:
        raise EstimatorError(f"regression slope k = {reg.k:.6g} leaves no room for 1 - k", _diagnostics(reg))
    value = _check_value(reg.b / (1.0 - reg.k), method, reg, 0.0)
    return DasfEstimate(value=value, method=method, dc_used=0.0, regression=reg)


def sdasf(brf: Spectrum, omega_r: Spectrum, w: BandWindow = BandWindow()) -> DasfEstimate:
    """Standard estimator b / (1 - k) against the reference leaf albedo."""
    return _from_regression(regress_brf(brf, omega_r, w), EstimateMethod.SDASF)


def dasf0_from_true_albedo(brf: Spectrum, omega_true: Spectrum, w: BandWindow = BandWindow()) -> DasfEstimate:
    """Oracle DASF b0 / (1 - k0) from the canopy's own leaf albedo."""
    reg = regress_brf(brf, omega_true, w, AlbedoReference.TRUE_ALBEDO)
    return _from_regression(reg, EstimateMethod.DASF0)


def idasf(
    brf: Spectrum,
    omega_r: Spectrum,
    coeffs: DcModelCoefficients = DEFAULT_DC_COEFFICIENTS,
    w: BandWindow = BandWindow(),
    dc: Optional[float] = None,
) -> DasfEstimate:
    """
    Improved estimator b / (1 - k - DC).

    Args:
        brf: Canopy BRF; must cover the window and, unless dc is given, 710 and 2260 nm
        omega_r: Reference leaf albedo
        coeffs: DC model coefficients
        w: Regression window
        dc: Bias factor supplied directly instead of modelled from the BRF

    Raises:
        GridError: BRF lacks the DC model bands
        EstimatorError: 1 - k - DC <= 1e-6; diagnostics carry k, b, r2, dc, sdasf
    """
    reg = regress_brf(brf, omega_r, w)
    if dc is None:
        dc = dc_model(at(brf, DC_BANDS_NM[0]), at(brf, DC_BANDS_NM[1]), coeffs)
    denom = 1.0 - reg.k - dc
    if denom <= DENOMINATOR_GUARD:
        raise EstimatorError(
            f"1 - k - DC = {denom:.3g} (k = {reg.k:.6g}, DC = {dc:.6g}); bias correction invalid",
            _diagnostics(reg, dc),
        )
    value = _check_value(reg.b / denom, EstimateMethod.IDASF, reg, dc)
    return DasfEstimate(value=value, method=EstimateMethod.IDASF, dc_used=dc, regression=reg)


def dc0(reg: DasfRegression, dasf0: float) -> float:
    """Oracle bias factor DC0 = 1 - k - b / DASF0."""
    if not dasf0 > 0.0:
        raise ConfigurationError(f"DASF0 must be positive, got {dasf0}")
    return 1.0 - reg.k - reg.b / dasf0


def estimate(
    method: EstimateMethod,
    brf: Spectrum,
    omega_r: Spectrum,
    coeffs: DcModelCoefficients = DEFAULT_DC_COEFFICIENTS,
    w: BandWindow = BandWindow(),
    omega_true: Optional[Spectrum] = None,
) -> DasfEstimate:
    """Dispatch to one estimator."""
    if method is EstimateMethod.SDASF:
        return sdasf(brf, omega_r, w)
    if method is EstimateMethod.IDASF:
        return idasf(brf, omega_r, coeffs, w)
    if omega_true is None:
        raise ConfigurationError("dasf0 needs the true leaf albedo")
    return dasf0_from_true_albedo(brf, omega_true, w)


def estimate_batch(
    brfs: Sequence[Spectrum],
    omega_r: Spectrum,
    coeffs: DcModelCoefficients = DEFAULT_DC_COEFFICIENTS,
    w: BandWindow = BandWindow(),
    methods: Sequence[EstimateMethod] = (EstimateMethod.SDASF, EstimateMethod.IDASF),
    true_albedos: Optional[Sequence[Spectrum]] = None,
    processor: Optional[BatchProcessor] = None,
) -> List[BatchResult[List[DasfEstimate]]]:
    """
    Run the requested estimators over many BRF spectra.

    Each result holds one estimate per method, in the order given; an item
    fails as a whole when any of its estimators fails.
    """
    if EstimateMethod.DASF0 in methods:
        if true_albedos is None or len(true_albedos) != len(brfs):
            raise ConfigurationError("dasf0 needs one true albedo per BRF spectrum")
    processor = processor or BatchProcessor(label="estimate")

    def run(index: int) -> List[DasfEstimate]:
        truth = true_albedos[index] if true_albedos is not None else None
        return [estimate(m, brfs[index], omega_r, coeffs, w, truth) for m in methods]

    return processor.map_ordered(run, range(len(brfs)))
