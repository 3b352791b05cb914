"""Synthetic leaf population and DC-model calibration data structures."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ..errors import ConfigurationError
from .estimates import DcModelCoefficients
from .leaf import LeafBiochem

# Variable order of the correlation matrix
CORRELATION_ORDER: Tuple[str, ...] = ("cab", "car", "lma", "ewt")


@dataclass(frozen=True)
class ConstituentRange:
    """Normal-distribution moments and truncation bounds of one constituent."""
    mean: float
    std: float
    min: float
    max: float

    def __post_init__(self):
        if not self.min < self.max:
            raise ConfigurationError(f"min {self.min} must be below max {self.max}")
        if not self.std > 0.0:
            raise ConfigurationError(f"std must be positive, got {self.std}")
        if not self.min <= self.mean <= self.max:
            raise ConfigurationError(f"mean {self.mean} outside [{self.min}, {self.max}]")


@dataclass(frozen=True)
class ConstituentStats:
    """Per-constituent statistics in native units (ug/cm2, cm, g/cm2)."""
    cab: ConstituentRange
    car: ConstituentRange
    ewt: ConstituentRange
    lma: ConstituentRange

    @classmethod
    def from_dict(cls, data: Mapping[str, Mapping[str, float]]) -> "ConstituentStats":
        try:
            return cls(**{
                name: ConstituentRange(**{k: float(v) for k, v in data[name].items()})
                for name in ("cab", "car", "ewt", "lma")
            })
        except KeyError as exc:
            raise ConfigurationError(f"constituent statistics missing {exc.args[0]!r}") from None
        except TypeError as exc:
            raise ConfigurationError(f"malformed constituent statistics: {exc}") from None

    def to_dict(self) -> Dict[str, Dict[str, float]]:
        return {
            name: vars(getattr(self, name)).copy() for name in ("cab", "car", "ewt", "lma")
        }

    def ordered(self, order: Tuple[str, ...] = CORRELATION_ORDER) -> List[ConstituentRange]:
        return [getattr(self, name) for name in order]


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Symmetric, unit-diagonal, positive semi-definite 4x4 matrix over (cab, car, lma, ewt)."""
    values: NDArray[np.float64]

    def __post_init__(self):
        m = np.array(self.values, dtype=np.float64)
        if m.shape != (4, 4):
            raise ConfigurationError(f"correlation matrix must be 4x4, got {m.shape}")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ConfigurationError("correlation matrix is not symmetric")
        if not np.allclose(np.diag(m), 1.0, atol=1e-12):
            raise ConfigurationError("correlation matrix must have a unit diagonal")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise ConfigurationError("correlation matrix is not positive semi-definite")
        m.setflags(write=False)
        object.__setattr__(self, "values", m)

    @classmethod
    def identity(cls) -> "CorrelationMatrix":
        return cls(np.eye(4))

    @classmethod
    def from_pairs(cls, pairs: Mapping[str, float]) -> "CorrelationMatrix":
        """Build from off-diagonal entries keyed like 'cab-car'."""
        m = np.eye(4)
        index = {name: i for i, name in enumerate(CORRELATION_ORDER)}
        for key, value in pairs.items():
            try:
                first, second = (index[part.strip()] for part in key.split("-"))
            except (KeyError, ValueError):
                raise ConfigurationError(f"bad correlation key {key!r}") from None
            m[first, second] = m[second, first] = float(value)
        return cls(m)

    def pairs(self) -> Dict[str, float]:
        out = {}
        for i in range(4):
            for j in range(i + 1, 4):
                out[f"{CORRELATION_ORDER[i]}-{CORRELATION_ORDER[j]}"] = float(self.values[i, j])
        return out


@dataclass(frozen=True)
class SyntheticLeafSet:
    """Green leaves drawn from the truncated multivariate normal population."""
    leaves: Tuple[LeafBiochem, ...]
    seed: int
    n_requested: int
    n_retained: int

    def __post_init__(self):
        if self.n_retained != len(self.leaves) or self.n_retained > self.n_requested:
            raise ConfigurationError("inconsistent synthetic leaf set counts")

    def subset(self, n: Optional[int]) -> "SyntheticLeafSet":
        """First n leaves (desk-scale runs); None keeps everything."""
        if n is None or n >= self.n_retained:
            return self
        return SyntheticLeafSet(self.leaves[:n], self.seed, self.n_requested, n)


@dataclass(frozen=True)
class TrainingRecord:
    """One point of the (DC0, BRF710, BRF2260) training cloud."""
    leaf: LeafBiochem
    brf710: float
    brf2260: float
    dc0: float
    dasf0: float
    k: float
    b: float


@dataclass
class DcFitReport:
    """Outcome of a DC-model refit."""
    method: str
    rmse: float
    r2: float
    initial_rmse: float
    iterations: int
    converged: bool
    n_records: int
    status: int = 0
    message: str = ""
    # plot data: per-record (dc0, dc_model), and rotated x for two-stage fits
    scatter: List[Tuple[float, float]] = field(default_factory=list)
    rotated_x: List[float] = field(default_factory=list)
    rotation_deg: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "rmse": self.rmse,
            "r2": self.r2,
            "initial_rmse": self.initial_rmse,
            "iterations": self.iterations,
            "converged": self.converged,
            "n_records": self.n_records,
            "status": self.status,
            "message": self.message,
            "rotation_deg": self.rotation_deg,
        }


@dataclass
class DcFitResult:
    coefficients: DcModelCoefficients
    report: DcFitReport


@dataclass
class LeafInvariantRow:
    """Per-leaf within-leaf fit used by the within-leaf report."""
    leaf: LeafBiochem
    r: float
    p: float
    epsilon: float
    p0: float


@dataclass
class WithinLeafReport:
    """Fitted within-leaf relations next to the published reference values."""
    k_slope: float
    k_intercept: float
    b_slope: float
    b_intercept: float
    p0_intercept: float
    p0_coefficient: float        # p0 = intercept - coefficient / cab
    p_intercept: float
    p_coefficient: float         # p = intercept - coefficient / cab
    r_slope_p0: float
    r_intercept_p0: float        # r = slope * p0 + intercept
    k_mean: float
    k_std: float
    b_mean: float
    b_std: float
    epsilon_min: float
    epsilon_max: float
    r_cab_coefficient: float     # r = coefficient / cab - intercept
    r_cab_intercept: float
    p_mean_value_rmse: float     # RMSE of p ~ k_mean * p0 + b_mean
    bins: List[Dict[str, float]] = field(default_factory=list)
    rows: List[LeafInvariantRow] = field(default_factory=list)

    REFERENCE = {
        "k_line": (9.18, 0.98),
        "b_line": (-9.16, 0.02),
        "p0": (1.04, 15.54),
        "p": (1.04, 16.63),
        "r": (-0.97, 0.99),
        "r_cab": (15.07, 0.02),
        "k_mean_std": (1.07, 0.05),
        "b_mean_std": (-0.07, 0.05),
        "epsilon_range": (-0.07, 0.01),
    }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fitted": {
                "k_line": [self.k_slope, self.k_intercept],
                "b_line": [self.b_slope, self.b_intercept],
                "p0": [self.p0_intercept, self.p0_coefficient],
                "p": [self.p_intercept, self.p_coefficient],
                "r": [self.r_slope_p0, self.r_intercept_p0],
                "r_cab": [self.r_cab_coefficient, self.r_cab_intercept],
                "p_mean_value_rmse": self.p_mean_value_rmse,
                "k_mean_std": [self.k_mean, self.k_std],
                "b_mean_std": [self.b_mean, self.b_std],
                "epsilon_range": [self.epsilon_min, self.epsilon_max],
            },
            "reference": {key: list(value) for key, value in self.REFERENCE.items()},
            "bins": self.bins,
            "n_leaves": len(self.rows),
        }
