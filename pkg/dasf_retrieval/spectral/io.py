"""Spectrum CSV reading and writing (header: wavelength_nm,value)."""

import csv
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ..errors import ConfigurationError, DataFormatError
from ..models.spectrum import Spectrum, WavelengthGrid

logger = logging.getLogger(__name__)

SPECTRUM_COLUMNS = ("wavelength_nm", "value")

PathLike = Union[str, Path]


def read_csv_frame(path: PathLike, required: tuple) -> pd.DataFrame:
    """Read a CSV with pandas, checking that it exists and has the required columns."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"file not found: {path}")
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DataFormatError(f"{path}: cannot parse CSV ({exc})") from None
    missing = [col for col in required if col not in frame.columns]
    if missing:
        raise DataFormatError(f"{path}: missing columns {', '.join(missing)}")
    return frame


def grid_from_wavelengths(wavelengths: np.ndarray, source: str) -> WavelengthGrid:
    """Infer the grid of strictly ascending, evenly stepped integer wavelengths."""
    wl = np.asarray(wavelengths, dtype=np.float64)
    if wl.size == 0:
        raise DataFormatError(f"{source}: no rows")
    if not np.all(np.isfinite(wl)) or np.any(wl != np.round(wl)):
        raise DataFormatError(f"{source}: wavelengths must be integers")
    wl = wl.astype(np.int64)
    if wl.size == 1:
        return WavelengthGrid(int(wl[0]), int(wl[0]), 1)
    steps = np.diff(wl)
    if np.any(steps <= 0):
        bad = int(wl[1:][steps <= 0][0])
        raise DataFormatError(f"{source}: wavelengths not strictly ascending at {bad} nm")
    if np.any(steps != steps[0]):
        raise DataFormatError(f"{source}: wavelength gaps (uneven step)")
    return WavelengthGrid(int(wl[0]), int(wl[-1]), int(steps[0]))


def read_spectrum_csv(path: PathLike) -> Spectrum:
    """Load a spectrum; the grid is taken from the file."""
    frame = read_csv_frame(path, SPECTRUM_COLUMNS)
    values = pd.to_numeric(frame["value"], errors="coerce").to_numpy(dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise DataFormatError(f"{path}: non-numeric or non-finite values")
    grid = grid_from_wavelengths(frame["wavelength_nm"].to_numpy(), str(path))
    logger.debug("Read %d-point spectrum from %s", len(grid), path)
    return Spectrum(grid, values)


def write_spectrum_csv(s: Spectrum, path: PathLike) -> str:
    """Write a spectrum with round-trip float formatting; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SPECTRUM_COLUMNS)
        for nm, value in zip(s.wavelengths.tolist(), s.values.tolist()):
            writer.writerow([nm, repr(value)])
    return str(path)
