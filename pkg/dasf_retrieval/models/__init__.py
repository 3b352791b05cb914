"""Data models for DASF retrieval."""

from .spectrum import (
    DEFAULT_GRID, BandWindow, LineFit, Spectrum, ViewGeometry, WavelengthGrid,
)
from .leaf import (
    CONSTITUENTS, REFERENCE_BIOCHEM, FundamentalTerm, LeafBiochem, LeafOptics,
    OpticalConstants, WithinLeafFit, WithinLeafModels,
)
from .canopy import (
    DASF_SOFT_BOUND, CanopyReflectance, CanopyStructure, LidfKind, SIForwardParams,
)
from .estimates import (
    DEFAULT_DC_COEFFICIENTS, AlbedoReference, BiasFactors, DasfEstimate,
    DasfRegression, DcModelCoefficients, EstimateMethod,
)
from .calibration import (
    CORRELATION_ORDER, ConstituentRange, ConstituentStats, CorrelationMatrix,
    DcFitReport, DcFitResult, LeafInvariantRow, SyntheticLeafSet, TrainingRecord,
    WithinLeafReport,
)
from .validation import (
    EXPECTED_DIRECTIONS, AngleMap, Distribution, MeasuredCanopy, MeasuredReport,
    MetricReport, Observation, Species, SpeciesSummary, SweepAxis, SweepConfig,
    SweepPoint,
)

__all__ = [
    "DEFAULT_GRID",
    "BandWindow",
    "LineFit",
    "Spectrum",
    "ViewGeometry",
    "WavelengthGrid",
    "CONSTITUENTS",
    "REFERENCE_BIOCHEM",
    "FundamentalTerm",
    "LeafBiochem",
    "LeafOptics",
    "OpticalConstants",
    "WithinLeafFit",
    "WithinLeafModels",
    "DASF_SOFT_BOUND",
    "CanopyReflectance",
    "CanopyStructure",
    "LidfKind",
    "SIForwardParams",
    "DEFAULT_DC_COEFFICIENTS",
    "AlbedoReference",
    "BiasFactors",
    "DasfEstimate",
    "DasfRegression",
    "DcModelCoefficients",
    "EstimateMethod",
    "CORRELATION_ORDER",
    "ConstituentRange",
    "ConstituentStats",
    "CorrelationMatrix",
    "DcFitReport",
    "DcFitResult",
    "LeafInvariantRow",
    "SyntheticLeafSet",
    "TrainingRecord",
    "WithinLeafReport",
    "EXPECTED_DIRECTIONS",
    "AngleMap",
    "Distribution",
    "MeasuredCanopy",
    "MeasuredReport",
    "MetricReport",
    "Observation",
    "Species",
    "SpeciesSummary",
    "SweepAxis",
    "SweepConfig",
    "SweepPoint",
]
