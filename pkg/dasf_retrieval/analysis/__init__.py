"""DASF estimators and bias analysis."""

from .bias import bias_curve, bias_factors, dasf_prime_analytic, dc_model
from .regression import (
    DC_BANDS_NM, dasf0_from_true_albedo, dc0, estimate, estimate_batch, idasf,
    regress_brf, sdasf,
)

__all__ = [
    "bias_curve",
    "bias_factors",
    "dasf_prime_analytic",
    "dc_model",
    "DC_BANDS_NM",
    "dasf0_from_true_albedo",
    "dc0",
    "estimate",
    "estimate_batch",
    "idasf",
    "regress_brf",
    "sdasf",
]
