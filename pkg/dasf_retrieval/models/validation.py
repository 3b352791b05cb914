"""Sweep configurations, metric reports and measured-library structures."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigurationError
from .calibration import SyntheticLeafSet
from .canopy import CanopyStructure, LidfKind
from .spectrum import Spectrum, ViewGeometry

logger = logging.getLogger(__name__)

QUANTILES = (5.0, 25.0, 50.0, 75.0, 95.0)


class SweepAxis(Enum):
    """Canopy parameter varied by a sweep."""
    LAI = "lai"
    LIDF = "lidf"
    VZA = "vza"


@dataclass(frozen=True)
class SweepPoint:
    """One canopy/geometry configuration of a sweep."""
    axis: SweepAxis
    value: str
    structure: CanopyStructure
    geometry: ViewGeometry


@dataclass
class SweepConfig:
    """One-at-a-time sweeps around the default canopy."""
    leaves: SyntheticLeafSet
    lai_values: List[float] = field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
    lidf_kinds: List[LidfKind] = field(default_factory=lambda: list(LidfKind))
    vza_values: List[float] = field(default_factory=lambda: [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0])
    vza_raa_deg: float = 180.0
    base_structure: CanopyStructure = CanopyStructure()
    base_geometry: ViewGeometry = ViewGeometry()

    def __post_init__(self):
        if not (self.lai_values and self.lidf_kinds and self.vza_values):
            raise ConfigurationError("sweep value lists must be non-empty")
        if not self.leaves.leaves:
            raise ConfigurationError("sweep needs at least one leaf")

    def points(self, axes: Optional[Sequence[SweepAxis]] = None) -> List[SweepPoint]:
        """Configurations of the requested axes, holding the others at the base."""
        axes = list(axes) if axes else list(SweepAxis)
        s, g = self.base_structure, self.base_geometry
        out: List[SweepPoint] = []
        for axis in axes:
            if axis is SweepAxis.LAI:
                for lai in self.lai_values:
                    out.append(SweepPoint(axis, _label(lai), CanopyStructure(
                        lai=lai, lidf_a=s.lidf_a, lidf_b=s.lidf_b, hotspot=s.hotspot), g))
            elif axis is SweepAxis.LIDF:
                for kind in self.lidf_kinds:
                    out.append(SweepPoint(axis, kind.value, CanopyStructure.from_kind(
                        kind, lai=s.lai, hotspot=s.hotspot), g))
            else:
                for vza in self.vza_values:
                    out.append(SweepPoint(axis, _label(vza), s, ViewGeometry(
                        sza_deg=g.sza_deg, vza_deg=vza, raa_deg=self.vza_raa_deg)))
        return out


def _label(value: float) -> str:
    return f"{value:g}"


@dataclass
class Distribution:
    """Summary of one estimator's values across the leaves of a configuration."""
    mean: float
    quantiles: List[float]
    values: List[float]

    @classmethod
    def of(cls, values: Sequence[float]) -> "Distribution":
        arr = np.asarray(values, dtype=np.float64)
        if arr.size == 0:
            return cls(float("nan"), [float("nan")] * len(QUANTILES), [])
        return cls(float(arr.mean()), [float(q) for q in np.percentile(arr, QUANTILES)], arr.tolist())

    def to_dict(self, include_values: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "mean": self.mean,
            "quantiles": dict(zip((f"p{int(q)}" for q in QUANTILES), self.quantiles)),
        }
        if include_values:
            data["values"] = self.values
        return data


@dataclass
class MetricReport:
    """Estimator accuracy for one sweep configuration."""
    point: SweepPoint
    dasf0: Distribution
    sdasf: Distribution
    idasf: Distribution
    rrmse_sdasf: float
    rrmse_idasf: float
    non_absorbing_brf: float
    n_ok: int
    n_failed: int
    dc_scatter: List[Tuple[float, float]] = field(default_factory=list)
    dc_r2: float = float("nan")

    @property
    def rrmse_reduction(self) -> float:
        if self.rrmse_sdasf <= 0.0:
            return 0.0
        return 100.0 * (1.0 - self.rrmse_idasf / self.rrmse_sdasf)


class Species(Enum):
    """Tree species of a measured canopy."""
    PINE = "pine"
    OAK = "oak"
    OTHER = "other"

    @classmethod
    def parse(cls, name: str) -> "Species":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            logger.warning("Unknown species %r, recording as 'other'", name)
            return cls.OTHER


# (signed vza, raa) of one measured view direction
Direction = Tuple[float, float]

EXPECTED_DIRECTIONS = 54


@dataclass
class MeasuredCanopy:
    """Goniometer canopy with its leaf albedo and per-direction BRF spectra."""
    canopy_id: str
    species: Species
    leaf_albedo: Spectrum
    brf: Dict[Direction, Spectrum]

    def __post_init__(self):
        w = self.leaf_albedo.values
        if np.any(w <= 0.0) or np.any(w > 1.0 + 1e-6):
            raise ConfigurationError(f"canopy {self.canopy_id}: leaf albedo outside (0, 1]")
        if not self.brf:
            raise ConfigurationError(f"canopy {self.canopy_id}: no view directions")


@dataclass
class Observation:
    """DASF estimates for one (canopy, direction)."""
    canopy_id: str
    species: Species
    direction: Direction
    dasf0: Optional[float] = None
    sdasf: Optional[float] = None
    idasf: Optional[float] = None
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.dasf0 is not None and self.sdasf is not None and self.idasf is not None

    @property
    def ae_sdasf(self) -> float:
        return abs(self.sdasf - self.dasf0)

    @property
    def ae_idasf(self) -> float:
        return abs(self.idasf - self.dasf0)


@dataclass
class SpeciesSummary:
    """MAE comparison for one species."""
    species: Species
    mae_sdasf: float
    mae_idasf: float
    n_observations: int
    n_failed: int
    histogram_edges: List[float] = field(default_factory=list)
    histogram_sdasf: List[int] = field(default_factory=list)
    histogram_idasf: List[int] = field(default_factory=list)

    @property
    def mae_reduction_pct(self) -> float:
        if self.mae_sdasf <= 0.0:
            return 0.0
        return 100.0 * (1.0 - self.mae_idasf / self.mae_sdasf)


@dataclass
class AngleMap:
    """Per-direction values averaged over the canopies of one species."""
    species: Species
    cells: Dict[Direction, float]

    def to_rows(self) -> List[Dict[str, float]]:
        return [
            {"vza_deg": vza, "raa_deg": raa, "value": value}
            for (vza, raa), value in sorted(self.cells.items())
        ]


@dataclass
class MeasuredReport:
    """Per-species validation of the estimators on a measured library."""
    observations: List[Observation]
    summaries: Dict[Species, SpeciesSummary]
    delta_ae_maps: Dict[Species, AngleMap]
    dasf0_maps: Dict[Species, AngleMap]

    @property
    def n_failed(self) -> int:
        return sum(1 for obs in self.observations if not obs.ok)
