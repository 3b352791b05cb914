"""Leaf optics: plate model, reference albedo and within-leaf invariants."""

from .constants import CONSTANTS_COLUMNS, constants_summary, load_constants
from .prospect import plate_transmissivity, prospect, reference_albedo, tav
from .invariants import (
    GREEN_LEAF_MIN_CAB, albedo_from_fundamental, albedo_with_surface, fit_p_leaf,
    fundamental_from_albedo, leaf_invariant_fit, power_approx, scaled_leaf_recollision,
    transformed_albedo_model, transformed_coefficients, transformed_from_albedo,
    within_leaf_models,
)

__all__ = [
    "CONSTANTS_COLUMNS",
    "constants_summary",
    "load_constants",
    "plate_transmissivity",
    "prospect",
    "reference_albedo",
    "tav",
    "GREEN_LEAF_MIN_CAB",
    "albedo_from_fundamental",
    "albedo_with_surface",
    "fit_p_leaf",
    "fundamental_from_albedo",
    "leaf_invariant_fit",
    "power_approx",
    "scaled_leaf_recollision",
    "transformed_albedo_model",
    "transformed_coefficients",
    "transformed_from_albedo",
    "within_leaf_models",
]
