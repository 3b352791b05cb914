"""Band extraction, exact grid lookup and least-squares line fitting."""

from typing import Sequence, Union

import numpy as np

from ..errors import ConfigurationError, DegenerateFitError, GridError, NumericalError
from ..models.spectrum import BandWindow, LineFit, Spectrum

# Variance of x below which a regression is considered degenerate
MIN_X_VARIANCE = 1e-12

ArrayLike = Union[Sequence[float], np.ndarray]


def slice_band(s: Spectrum, w: BandWindow) -> Spectrum:
    """Contiguous sub-spectrum covering [w.lo_nm, w.hi_nm] inclusive."""
    try:
        sub = s.grid.sub(w.lo_nm, w.hi_nm)
    except GridError:
        raise GridError(
            f"window {w} is not inside the spectrum grid "
            f"{s.grid.start_nm}-{s.grid.end_nm} nm"
        ) from None
    lo = s.grid.index(w.lo_nm)
    return Spectrum(sub, s.values[lo:lo + len(sub)])


def at(s: Spectrum, nm: int) -> float:
    """Exact value at a grid wavelength (no interpolation)."""
    return float(s.values[s.grid.index(nm)])


def linear_fit(x: ArrayLike, y: ArrayLike) -> LineFit:
    """
    Ordinary least-squares fit of y = slope * x + intercept.

    Args:
        x: Regressor values
        y: Response values, same length as x

    Returns:
        LineFit with r2 = 1 - SSres/SStot (1 when y is constant)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ConfigurationError(f"x and y must be 1-D of equal length, got {x.shape} and {y.shape}")
    n = x.size
    if n < 3:
        raise DegenerateFitError(f"line fit needs at least 3 points, got {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise NumericalError("line fit input contains non-finite values")

    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    if sxx / n <= MIN_X_VARIANCE:
        raise DegenerateFitError("near-zero variance in x (flat BRF band?)")

    slope = float(dx @ dy) / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    residuals = y - (slope * x + intercept)
    ss_res = float(residuals @ residuals)
    ss_tot = float(dy @ dy)
    if ss_tot == 0.0:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return LineFit(slope=slope, intercept=intercept, r2=r2, n=n)
