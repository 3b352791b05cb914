"""Wavelength grid, spectrum, band window and view geometry."""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.typing import NDArray

from ..errors import ConfigurationError, GridError, NumericalError


@dataclass(frozen=True)
class WavelengthGrid:
    """Evenly stepped integer wavelength grid (nm), both ends inclusive."""
    start_nm: int = 400
    end_nm: int = 2500
    step_nm: int = 1

    def __post_init__(self):
        if self.step_nm <= 0:
            raise GridError(f"step_nm must be positive, got {self.step_nm}")
        # start == end only arises from single-wavelength band slices
        if self.start_nm > self.end_nm:
            raise GridError(f"start_nm {self.start_nm} exceeds end_nm {self.end_nm}")
        if (self.end_nm - self.start_nm) % self.step_nm != 0:
            raise GridError(
                f"step {self.step_nm} nm does not divide {self.start_nm}-{self.end_nm} nm"
            )

    def __len__(self) -> int:
        return (self.end_nm - self.start_nm) // self.step_nm + 1

    def wavelengths(self) -> NDArray[np.int64]:
        """Integer wavelengths of every grid point."""
        return np.arange(self.start_nm, self.end_nm + 1, self.step_nm, dtype=np.int64)

    def contains(self, nm: int) -> bool:
        """Check whether nm is exactly a grid point."""
        return (
            self.start_nm <= nm <= self.end_nm
            and (nm - self.start_nm) % self.step_nm == 0
        )

    def index(self, nm: int) -> int:
        """Position of wavelength nm on the grid."""
        if not self.contains(nm):
            raise GridError(
                f"{nm} nm is not on the grid {self.start_nm}-{self.end_nm} nm "
                f"(step {self.step_nm})"
            )
        return (nm - self.start_nm) // self.step_nm

    def sub(self, lo_nm: int, hi_nm: int) -> "WavelengthGrid":
        """Sub-grid covering [lo_nm, hi_nm]; both ends must be grid points."""
        self.index(lo_nm)
        self.index(hi_nm)
        return WavelengthGrid(lo_nm, hi_nm, self.step_nm)


DEFAULT_GRID = WavelengthGrid()


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Values sampled on a wavelength grid.

    The values array is copied on construction and made read-only, so a
    Spectrum can be shared freely between worker threads.
    """
    grid: WavelengthGrid
    values: NDArray[np.float64]

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size != len(self.grid):
            raise GridError(
                f"spectrum has {values.size} values but its grid has {len(self.grid)} points"
            )
        if not np.all(np.isfinite(values)):
            raise NumericalError("spectrum contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    @classmethod
    def constant(cls, value: float, grid: WavelengthGrid = DEFAULT_GRID) -> "Spectrum":
        """Spectrum with the same value at every wavelength."""
        return cls(grid, np.full(len(grid), float(value)))

    @classmethod
    def from_function(
        cls, fn: Callable[[NDArray[np.float64]], NDArray[np.float64]],
        grid: WavelengthGrid = DEFAULT_GRID,
    ) -> "Spectrum":
        """Evaluate fn on the grid wavelengths."""
        return cls(grid, fn(grid.wavelengths().astype(np.float64)))

    @property
    def wavelengths(self) -> NDArray[np.int64]:
        return self.grid.wavelengths()

    def _require_same_grid(self, other: "Spectrum") -> None:
        if other.grid != self.grid:
            raise GridError(f"grid mismatch: {self.grid} vs {other.grid}")

    def scaled(self, factor: float) -> "Spectrum":
        return Spectrum(self.grid, self.values * factor)

    def ratio(self, other: "Spectrum") -> "Spectrum":
        """Pointwise self / other on a shared grid."""
        self._require_same_grid(other)
        if np.any(other.values == 0.0):
            raise NumericalError("division by a spectrum containing zeros")
        return Spectrum(self.grid, self.values / other.values)

    def plus(self, other: "Spectrum") -> "Spectrum":
        self._require_same_grid(other)
        return Spectrum(self.grid, self.values + other.values)

    def map(self, fn: Callable[[NDArray[np.float64]], NDArray[np.float64]]) -> "Spectrum":
        """Apply a vectorized function to the values."""
        return Spectrum(self.grid, fn(self.values))

    def allclose(self, other: "Spectrum", atol: float = 1e-12) -> bool:
        return other.grid == self.grid and bool(
            np.allclose(self.values, other.values, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True)
class BandWindow:
    """Inclusive wavelength window used for the spectral-invariant regression."""
    lo_nm: int = 710
    hi_nm: int = 790

    def __post_init__(self):
        if self.lo_nm > self.hi_nm:
            raise ConfigurationError(f"window lower bound {self.lo_nm} exceeds {self.hi_nm}")

    @classmethod
    def parse(cls, text: Union[str, "BandWindow"]) -> "BandWindow":
        """Parse the CLI form 'lo:hi'."""
        if isinstance(text, BandWindow):
            return text
        try:
            lo, hi = (int(part) for part in str(text).split(":"))
        except ValueError:
            raise ConfigurationError(f"window must look like 710:790, got {text!r}") from None
        return cls(lo, hi)

    def __str__(self) -> str:
        return f"{self.lo_nm}:{self.hi_nm}"


@dataclass(frozen=True)
class ViewGeometry:
    """Sun and view directions; raa is view azimuth minus sun azimuth."""
    sza_deg: float = 30.0
    vza_deg: float = 0.0
    raa_deg: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.sza_deg < 90.0:
            raise ConfigurationError(f"sza_deg must be in [0, 90), got {self.sza_deg}")
        if not 0.0 <= self.vza_deg < 90.0:
            raise ConfigurationError(f"vza_deg must be in [0, 90), got {self.vza_deg}")
        object.__setattr__(self, "raa_deg", float(self.raa_deg) % 360.0)

    @property
    def folded_raa_deg(self) -> float:
        """Relative azimuth folded onto [0, 180]; 0 puts the sensor on the sun side."""
        return self.raa_deg if self.raa_deg <= 180.0 else 360.0 - self.raa_deg


@dataclass(frozen=True)
class LineFit:
    """Ordinary least-squares line y = slope * x + intercept."""
    slope: float
    intercept: float
    r2: float
    n: int
