"""Synthetic leaf sampling, training clouds and model refits."""

from .sampler import sample_correlation, sample_leaves, symmetric_sqrt
from .inputs import correlation_from_dict, load_correlation, load_stats, stats_from_dict
from .training import build_training_set, training_record
from .dc_fit import fit_dc_model, fit_dc_model_two_stage
from .within_leaf import fit_within_leaf_relations

__all__ = [
    "sample_correlation",
    "sample_leaves",
    "symmetric_sqrt",
    "correlation_from_dict",
    "load_correlation",
    "load_stats",
    "stats_from_dict",
    "build_training_set",
    "training_record",
    "fit_dc_model",
    "fit_dc_model_two_stage",
    "fit_within_leaf_relations",
]
