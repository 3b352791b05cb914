"""Leaf biochemistry, optical constants and leaf-level optical properties."""

from dataclasses import dataclass, replace
from typing import Dict, Tuple

import numpy as np
from numpy.typing import NDArray

from ..errors import ConfigurationError, DataFormatError, GridError
from .spectrum import Spectrum, WavelengthGrid

# Absorbing constituents in the order of the constants CSV columns
CONSTITUENTS: Tuple[str, ...] = ("cab", "car", "anth", "brown", "ewt", "lma")


@dataclass(frozen=True, eq=False)
class OpticalConstants:
    """
    Refractive index and specific absorption coefficients on a grid.

    Units: k_cab, k_car, k_anth in cm2/ug; k_brown unitless;
    k_ewt in 1/cm; k_lma in cm2/g.
    """
    grid: WavelengthGrid
    n: NDArray[np.float64]
    k_cab: NDArray[np.float64]
    k_car: NDArray[np.float64]
    k_anth: NDArray[np.float64]
    k_brown: NDArray[np.float64]
    k_ewt: NDArray[np.float64]
    k_lma: NDArray[np.float64]

    def __post_init__(self):
        size = len(self.grid)
        for name in ("n",) + tuple(f"k_{c}" for c in CONSTITUENTS):
            series = np.array(getattr(self, name), dtype=np.float64)
            if series.shape != (size,):
                raise GridError(f"{name} has {series.size} values, grid has {size}")
            if not np.all(np.isfinite(series)):
                raise DataFormatError(f"{name} contains non-finite values")
            if name == "n":
                if np.any(series <= 1.0):
                    raise DataFormatError("refractive index must exceed 1 everywhere")
            elif np.any(series < 0.0):
                raise DataFormatError(f"{name} has negative coefficients")
            series.setflags(write=False)
            object.__setattr__(self, name, series)

    def coefficient(self, constituent: str) -> NDArray[np.float64]:
        """Specific absorption coefficient series of one constituent."""
        if constituent not in CONSTITUENTS:
            raise ConfigurationError(f"unknown constituent {constituent!r}")
        return getattr(self, f"k_{constituent}")

    def with_constant_refractive_index(self, value: float) -> "OpticalConstants":
        """Copy with n(lambda) replaced by a constant."""
        return replace(self, n=np.full(len(self.grid), float(value)))


@dataclass(frozen=True)
class LeafBiochem:
    """Plate-model inputs: structure parameter N plus constituent contents."""
    n_struct: float = 1.5
    cab: float = 0.0     # ug/cm2
    car: float = 0.0     # ug/cm2
    anth: float = 0.0    # ug/cm2
    brown: float = 0.0   # unitless
    ewt: float = 0.0     # cm
    lma: float = 0.0     # g/cm2

    def __post_init__(self):
        if not self.n_struct >= 1.0:
            raise ConfigurationError(f"n_struct must be >= 1, got {self.n_struct}")
        for name in CONSTITUENTS:
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0.0):
                raise ConfigurationError(f"{name} must be a nonnegative number, got {value}")

    def concentrations(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in CONSTITUENTS}


# Reference leaf for the reference albedo
REFERENCE_BIOCHEM = LeafBiochem(n_struct=1.5, cab=16.0, ewt=0.005, lma=0.002)


@dataclass(frozen=True)
class LeafOptics:
    """Directional-hemispherical reflectance, transmittance and albedo."""
    reflectance: Spectrum
    transmittance: Spectrum
    albedo: Spectrum
    surface_fraction: float = 0.0

    def __post_init__(self):
        grid = self.reflectance.grid
        if self.transmittance.grid != grid or self.albedo.grid != grid:
            raise GridError("reflectance, transmittance and albedo must share a grid")
        r, t = self.reflectance.values, self.transmittance.values
        if np.any(r < 0.0) or np.any(t < 0.0):
            raise ConfigurationError("leaf reflectance and transmittance must be nonnegative")
        if np.any(r + t > 1.0 + 1e-9):
            raise ConfigurationError("leaf reflectance + transmittance exceeds 1")
        if not np.allclose(self.albedo.values, r + t, rtol=0.0, atol=1e-12):
            raise ConfigurationError("leaf albedo must equal reflectance + transmittance")
        if not 0.0 <= self.surface_fraction <= 0.05:
            raise ConfigurationError(
                f"surface_fraction must be in [0, 0.05], got {self.surface_fraction}"
            )

    @classmethod
    def from_rt(
        cls, reflectance: Spectrum, transmittance: Spectrum, surface_fraction: float = 0.0
    ) -> "LeafOptics":
        return cls(
            reflectance, transmittance, reflectance.plus(transmittance), surface_fraction
        )

    @property
    def grid(self) -> WavelengthGrid:
        return self.reflectance.grid

    def transformed_albedo(self) -> Spectrum:
        """Albedo of photons interacting with the leaf interior."""
        s = self.surface_fraction
        return self.albedo.map(lambda w: (w - s) / (1.0 - s))


@dataclass(frozen=True)
class WithinLeafFit:
    """Within-leaf spectral-invariant line: varpi / varpi_r = r + p * varpi."""
    r: float
    p: float
    epsilon: float

    def __post_init__(self):
        # p < 0 is legitimate for leaves less absorbing than the reference
        if not self.p < 1.0:
            raise ConfigurationError(f"within-leaf recollision must be < 1, got {self.p}")
        if not self.r > 0.0:
            raise ConfigurationError(f"within-leaf intercept must be positive, got {self.r}")


@dataclass(frozen=True)
class FundamentalTerm:
    """Fundamental scattering term W_leaf and within-leaf recollision p_leaf."""
    w_leaf: Spectrum
    p_leaf: float

    def __post_init__(self):
        if not 0.0 <= self.p_leaf < 1.0:
            raise ConfigurationError(f"p_leaf must be in [0, 1), got {self.p_leaf}")
        w = self.w_leaf.values
        if np.any(w <= 0.0) or np.any(w > 1.0 + 1e-12):
            raise ConfigurationError("fundamental term must lie in (0, 1]")


@dataclass(frozen=True)
class WithinLeafModels:
    """Closed-form within-leaf relations evaluated for one leaf."""
    p0: float
    p: float
    r: float
    k_line: float
    b_line: float
