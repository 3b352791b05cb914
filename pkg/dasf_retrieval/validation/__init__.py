"""Sensitivity sweeps and measured-library validation."""

from .metrics import mae, rrmse, rrmse_reduction
from .sweep import LeafOutcome, run_sweep, summarize_sweep
from .measured import LEAF_COLUMNS, SPECTRA_COLUMNS, ingest_measured_library, validate_measured

__all__ = [
    "mae",
    "rrmse",
    "rrmse_reduction",
    "LeafOutcome",
    "run_sweep",
    "summarize_sweep",
    "LEAF_COLUMNS",
    "SPECTRA_COLUMNS",
    "ingest_measured_library",
    "validate_measured",
]
