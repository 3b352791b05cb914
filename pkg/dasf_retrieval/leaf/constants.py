"""Leaf optical constants (refractive index and specific absorption coefficients)."""

import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from ..errors import DataFormatError
from ..models.leaf import CONSTITUENTS, OpticalConstants
from ..models.spectrum import DEFAULT_GRID, BandWindow, WavelengthGrid
from ..spectral.core import at, slice_band
from ..spectral.io import grid_from_wavelengths, read_csv_frame
from .prospect import reference_albedo

logger = logging.getLogger(__name__)

CONSTANTS_COLUMNS = ("wavelength_nm", "n") + tuple(f"k_{c}" for c in CONSTITUENTS)


def load_constants(path: Union[str, Path], grid: WavelengthGrid = DEFAULT_GRID) -> OpticalConstants:
    """
    Load a constants CSV covering the full wavelength grid.

    Raises:
        ConfigurationError: file missing
        DataFormatError: missing columns, non-monotone wavelengths, gaps,
            incomplete coverage or negative coefficients
    """
    frame = read_csv_frame(path, CONSTANTS_COLUMNS)
    found = grid_from_wavelengths(frame["wavelength_nm"].to_numpy(), str(path))
    if found != grid:
        raise DataFormatError(
            f"{path}: covers {found.start_nm}-{found.end_nm} nm (step {found.step_nm}), "
            f"expected {grid.start_nm}-{grid.end_nm} nm (step {grid.step_nm})"
        )

    series = {}
    for column in CONSTANTS_COLUMNS[1:]:
        values = pd.to_numeric(frame[column], errors="coerce").to_numpy(dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise DataFormatError(f"{path}: column {column} has missing or non-numeric values")
        series[column] = values

    constants = OpticalConstants(grid=grid, **series)
    logger.info("Loaded optical constants from %s (%d wavelengths)", path, len(grid))
    return constants


def constants_summary(oc: OpticalConstants) -> Dict[str, Any]:
    """Grid, refractive-index range and peak absorption of every constituent."""
    wl = oc.grid.wavelengths()
    peaks = {}
    for name in CONSTITUENTS:
        k = oc.coefficient(name)
        i = int(np.argmax(k))
        peaks[name] = {"max": float(k[i]), "at_nm": int(wl[i])}
    return {
        "grid": {
            "start_nm": oc.grid.start_nm,
            "end_nm": oc.grid.end_nm,
            "step_nm": oc.grid.step_nm,
            "points": len(oc.grid),
        },
        "n_range": [float(oc.n.min()), float(oc.n.max())],
        "peaks": peaks,
        "red_edge": _red_edge_check(oc),
    }


def _red_edge_check(oc: OpticalConstants) -> Dict[str, Any]:
    """Reference albedo must rise from the red well (680 nm) into the window."""
    omega_r = reference_albedo(oc)
    red = at(omega_r, 680)
    edge = float(slice_band(omega_r, BandWindow()).values.max())
    return {"albedo_680": red, "albedo_window_max": edge, "ok": edge > red}
