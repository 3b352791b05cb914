"""Dry-matter bias of the standard estimator: closed-form factors and the DC model."""

import logging
import math
from typing import Any, Dict, List, Sequence

from ..errors import ConfigurationError, NumericalError
from ..leaf.invariants import transformed_coefficients
from ..models.canopy import SIForwardParams
from ..models.estimates import DEFAULT_DC_COEFFICIENTS, BiasFactors, DcModelCoefficients

logger = logging.getLogger(__name__)

# Admissible BRF range for the DC model inputs
DC_INPUT_RANGE = (0.0, 1.5)


def dc_model(brf710: float, brf2260: float, coeffs: DcModelCoefficients = DEFAULT_DC_COEFFICIENTS) -> float:
    """DC = exp(c1 * BRF710 + c2 * BRF2260 + c3) + c4."""
    lo, hi = DC_INPUT_RANGE
    for name, value in (("brf710", brf710), ("brf2260", brf2260)):
        if not lo <= value <= hi:
            raise ConfigurationError(f"{name} = {value} outside [{lo}, {hi}]")
    exponent = coeffs.c1 * brf710 + coeffs.c2 * brf2260 + coeffs.c3
    try:
        return math.exp(exponent) + coeffs.c4
    except OverflowError:
        raise NumericalError(f"DC model overflow (exponent {exponent:.4g})") from None


def bias_factors(t_c: float, t_m: float, cm_km: float, p_leaf: float) -> BiasFactors:
    """
    Bias factors of a leaf with t_c times the reference chlorophyll and t_m
    times the reference dry matter.

    Args:
        t_c: Chlorophyll ratio to the reference leaf
        t_m: Dry-matter ratio to the reference leaf
        cm_km: Reference dry-matter absorption (C_m * k_m) over the window
        p_leaf: Within-leaf recollision probability

    Returns:
        BiasFactors with dc = D * C
    """
    a, q, _ = transformed_coefficients(t_c, t_m, cm_km, p_leaf)
    c = (1.0 - a) / (a * (1.0 - p_leaf))
    d = a * (1.0 - q)
    return BiasFactors(t_c=t_c, t_m=t_m, cm_km=cm_km, p_leaf=p_leaf, A=a, C=c, D=d, dc=d * c, q=q)


def dasf_prime_analytic(params: SIForwardParams, bf: BiasFactors) -> float:
    """Biased DASF rho_i0 / (1 - p + C) that the standard estimator returns."""
    denom = 1.0 - params.p + bf.C
    if denom <= 0.0:
        raise NumericalError(f"1 - p + C = {denom:.4g} must be positive")
    return params.rho_i0 / denom


def bias_curve(
    t_c: float, t_m_values: Sequence[float], cm_km: float, p_leaf: float, params: SIForwardParams
) -> List[Dict[str, Any]]:
    """Bias factors and biased DASF across dry-matter ratios at fixed t_c."""
    rows = []
    for t_m in t_m_values:
        bf = bias_factors(t_c, t_m, cm_km, p_leaf)
        prime = dasf_prime_analytic(params, bf)
        rows.append({
            "t_c": t_c,
            "t_m": t_m,
            "A": bf.A,
            "C": bf.C,
            "D": bf.D,
            "dc": bf.dc,
            "dasf": params.dasf,
            "dasf_prime": prime,
            "ratio": prime / params.dasf,
        })
    logger.debug("Bias curve over %d dry-matter ratios", len(rows))
    return rows
