"""Spectral core: grid lookups, band slicing, line fitting and spectrum I/O."""

from .core import at, linear_fit, slice_band
from .io import read_spectrum_csv, write_spectrum_csv

__all__ = [
    "at",
    "linear_fit",
    "slice_band",
    "read_spectrum_csv",
    "write_spectrum_csv",
]
