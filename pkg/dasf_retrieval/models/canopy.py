"""Canopy structure, leaf inclination kinds and canopy reflectance results."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from ..errors import ConfigurationError
from .spectrum import Spectrum

logger = logging.getLogger(__name__)

# Upper bound on a physically plausible DASF
DASF_SOFT_BOUND = 1.5


class LidfKind(Enum):
    """Canonical two-parameter leaf inclination distributions."""
    PLANOPHILE = "planophile"
    ERECTOPHILE = "erectophile"
    PLAGIOPHILE = "plagiophile"
    EXTREMOPHILE = "extremophile"
    SPHERICAL = "spherical"
    UNIFORM = "uniform"

    @property
    def parameters(self) -> Tuple[float, float]:
        """(a, b) pair of the distribution."""
        return _LIDF_PARAMETERS[self]

    @classmethod
    def parse(cls, name: str) -> "LidfKind":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            known = ", ".join(kind.value for kind in cls)
            raise ConfigurationError(f"unknown LIDF kind {name!r} (known: {known})") from None


_LIDF_PARAMETERS = {
    LidfKind.PLANOPHILE: (1.0, 0.0),
    LidfKind.ERECTOPHILE: (-1.0, 0.0),
    LidfKind.PLAGIOPHILE: (0.0, -1.0),
    LidfKind.EXTREMOPHILE: (0.0, 1.0),
    LidfKind.SPHERICAL: (-0.35, -0.15),
    LidfKind.UNIFORM: (0.0, 0.0),
}


def check_lidf_parameters(a: float, b: float) -> None:
    """Raise unless (a, b) gives a nonnegative inclination density."""
    if abs(a) + abs(b) > 1.0 + 1e-12:
        raise ConfigurationError(f"inadmissible LIDF parameters a={a}, b={b}: |a| + |b| > 1")


@dataclass(frozen=True)
class CanopyStructure:
    """Homogeneous turbid-medium canopy layer."""
    lai: float = 5.0
    lidf_a: float = 0.0
    lidf_b: float = 0.0
    hotspot: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.lai <= 15.0:
            raise ConfigurationError(f"lai must be in (0, 15], got {self.lai}")
        check_lidf_parameters(self.lidf_a, self.lidf_b)
        if not self.hotspot >= 0.0:
            raise ConfigurationError(f"hotspot must be >= 0, got {self.hotspot}")

    @classmethod
    def from_kind(cls, kind: LidfKind, lai: float = 5.0, hotspot: float = 0.01) -> "CanopyStructure":
        a, b = kind.parameters
        return cls(lai=lai, lidf_a=a, lidf_b=b, hotspot=hotspot)


@dataclass(frozen=True)
class SIForwardParams:
    """Spectral-invariant canopy: rho_i0 is the product rho(Omega) * i0."""
    rho_i0: float
    p: float

    def __post_init__(self):
        if not self.rho_i0 > 0.0:
            raise ConfigurationError(f"rho_i0 must be positive, got {self.rho_i0}")
        if not 0.0 <= self.p < 1.0:
            raise ConfigurationError(f"recollision probability must be in [0, 1), got {self.p}")
        if self.dasf > DASF_SOFT_BOUND:
            logger.warning(
                "rho_i0/(1-p) = %.4f exceeds the physical bound %.1f", self.dasf, DASF_SOFT_BOUND
            )

    @property
    def dasf(self) -> float:
        return self.rho_i0 / (1.0 - self.p)


@dataclass(frozen=True)
class CanopyReflectance:
    """Four-stream canopy reflectance components over a soil boundary."""
    brf: Spectrum        # total bidirectional reflectance factor
    single: Spectrum     # hotspot-corrected single scattering by foliage
    multiple: Spectrum   # multiple scattering by foliage
    rdd: Spectrum        # bihemispherical reflectance of the layer
    tdd: Spectrum        # bihemispherical transmittance of the layer
    tss: float           # direct transmittance, sun path
    too: float           # direct transmittance, view path
