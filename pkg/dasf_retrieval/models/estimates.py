"""DASF regression, estimate, DC-model and bias-factor data structures."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from ..errors import ConfigurationError
from .spectrum import BandWindow


class AlbedoReference(Enum):
    """Which albedo divides the BRF in the regression."""
    REFERENCE_ALBEDO = "reference_albedo"
    TRUE_ALBEDO = "true_albedo"


class EstimateMethod(Enum):
    """DASF estimators."""
    SDASF = "sdasf"
    IDASF = "idasf"
    DASF0 = "dasf0"


@dataclass(frozen=True)
class DasfRegression:
    """Slope k and intercept b of BRF/albedo regressed on BRF."""
    k: float
    b: float
    r2: float
    n: int
    window: BandWindow = BandWindow()
    reference: AlbedoReference = AlbedoReference.REFERENCE_ALBEDO


@dataclass(frozen=True)
class DasfEstimate:
    """A DASF value with the method and bias correction that produced it."""
    value: float
    method: EstimateMethod
    dc_used: float = 0.0
    regression: Optional[DasfRegression] = None

    def to_dict(self) -> Dict[str, Any]:
        reg = self.regression
        return {
            "method": self.method.value,
            "k": reg.k if reg else None,
            "b": reg.b if reg else None,
            "r2": reg.r2 if reg else None,
            "dc": self.dc_used,
            "dasf": self.value,
        }


@dataclass(frozen=True)
class DcModelCoefficients:
    """DC = exp(c1 * BRF710 + c2 * BRF2260 + c3) + c4."""
    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in self.as_tuple()):
            raise ConfigurationError(f"DC model coefficients must be finite, got {self.as_tuple()}")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=np.float64)

    @classmethod
    def from_sequence(cls, values) -> "DcModelCoefficients":
        c1, c2, c3, c4 = (float(v) for v in values)
        return cls(c1, c2, c3, c4)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DcModelCoefficients":
        try:
            return cls(*(float(data[key]) for key in ("c1", "c2", "c3", "c4")))
        except KeyError as exc:
            raise ConfigurationError(f"DC model coefficients missing {exc.args[0]!r}") from None

    def to_dict(self) -> Dict[str, float]:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4}

    @property
    def is_physical(self) -> bool:
        """Trained models increase with BRF710 and decrease with BRF2260."""
        return self.c1 > 0.0 and self.c2 < 0.0


# Calibration from the 1-D synthetic green-leaf training cloud
DEFAULT_DC_COEFFICIENTS = DcModelCoefficients(9.3894, -15.1453, -3.5058, -0.0227)


@dataclass(frozen=True)
class BiasFactors:
    """Dry-matter bias of the standard estimator for a leaf scaled from the reference."""
    t_c: float
    t_m: float
    cm_km: float
    p_leaf: float
    A: float
    C: float
    D: float
    dc: float
    q: float
