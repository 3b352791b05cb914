"""Configuration management for DASF retrieval runs."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigurationError, DataFormatError
from .models.canopy import CanopyStructure, LidfKind
from .models.estimates import DEFAULT_DC_COEFFICIENTS, DcModelCoefficients
from .models.spectrum import BandWindow, Spectrum, ViewGeometry
from .spectral.io import read_spectrum_csv

try:
    import yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

logger = logging.getLogger(__name__)

DEFAULT_SEED = 2024
CONSTANTS_ENV = "DASF_CONSTANTS_PATH"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)


class LidfParameters(_Section):
    a: float
    b: float


class CanopySettings(_Section):
    """Canopy structure and sun/view geometry (black soil unless a spectrum path is given)."""
    lai: float = Field(5.0, gt=0.0, le=15.0)
    lidf: Union[str, LidfParameters] = "uniform"
    hotspot: float = Field(0.01, ge=0.0)
    sza_deg: float = Field(30.0, ge=0.0, lt=90.0)
    vza_deg: float = Field(0.0, ge=0.0, lt=90.0)
    raa_deg: float = 0.0
    soil: str = "black"

    @field_validator("lidf")
    @classmethod
    def _known_kind(cls, value):
        if isinstance(value, str):
            LidfKind.parse(value)
        return value

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "CanopySettings":
        return _validated(cls, _read_mapping(path), str(path))

    def to_structure(self) -> CanopyStructure:
        if isinstance(self.lidf, str):
            return CanopyStructure.from_kind(LidfKind.parse(self.lidf), lai=self.lai, hotspot=self.hotspot)
        return CanopyStructure(lai=self.lai, lidf_a=self.lidf.a, lidf_b=self.lidf.b, hotspot=self.hotspot)

    def to_geometry(self) -> ViewGeometry:
        return ViewGeometry(sza_deg=self.sza_deg, vza_deg=self.vza_deg, raa_deg=self.raa_deg)

    def soil_spectrum(self) -> Optional[Spectrum]:
        """None for black soil, otherwise the soil reflectance spectrum."""
        if self.soil.strip().lower() == "black":
            return None
        return read_spectrum_csv(self.soil)


class CalibrationSettings(_Section):
    """Synthetic leaf population and DC refit options."""
    n: int = Field(2000, ge=1)
    stats: Optional[str] = None
    corr: Optional[str] = None
    two_stage: bool = False
    within_leaf: bool = False


class SweepSettings(_Section):
    """Sensitivity sweep axes and values."""
    axis: str = "all"
    lai_values: List[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0], min_length=1)
    lidf_kinds: List[str] = Field(default_factory=lambda: [k.value for k in LidfKind], min_length=1)
    vza_values: List[float] = Field(
        default_factory=lambda: [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0], min_length=1
    )
    vza_raa_deg: float = 180.0
    subset: Optional[int] = Field(None, ge=1)

    @field_validator("axis")
    @classmethod
    def _known_axis(cls, value: str) -> str:
        value = value.strip().lower()
        if value not in ("all", "lai", "lidf", "vza"):
            raise ValueError(f"axis must be one of all, lai, lidf, vza; got {value!r}")
        return value

    @field_validator("lidf_kinds")
    @classmethod
    def _known_kinds(cls, value: List[str]) -> List[str]:
        for kind in value:
            LidfKind.parse(kind)
        return value


class MeasuredSettings(_Section):
    """Measured library inputs."""
    spectra_file: Optional[str] = None
    leaf_file: Optional[str] = None


class RunConfig(_Section):
    """Main configuration container."""
    constants_path: Optional[str] = None
    window: str = "710:790"
    dc_coefficients: Optional[Union[str, Dict[str, float]]] = None
    seed: int = DEFAULT_SEED
    output_dir: str = "output"
    threads: Optional[int] = Field(None, ge=1)
    canopy: CanopySettings = Field(default_factory=CanopySettings)
    calibration: CalibrationSettings = Field(default_factory=CalibrationSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    measured: MeasuredSettings = Field(default_factory=MeasuredSettings)

    @field_validator("window")
    @classmethod
    def _window(cls, value: str) -> str:
        BandWindow.parse(value)
        return value

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Create config from dictionary."""
        return _validated(cls, data or {}, "configuration")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "RunConfig":
        """Load config from a JSON or YAML file."""
        return _validated(cls, _read_mapping(path), str(path))

    @classmethod
    def load(cls, path: Optional[str] = None) -> "RunConfig":
        """Load config from file or use defaults."""
        if path and not os.path.exists(path):
            raise ConfigurationError(f"config file not found: {path}")
        search_paths = [
            path,
            "dasf.json",
            os.path.expanduser("~/.config/dasf-retrieval/config.json"),
        ]
        for config_path in search_paths:
            if config_path and os.path.exists(config_path):
                logger.debug("Using config %s", config_path)
                return cls.from_file(config_path)
        return cls()

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        return self.model_dump(mode="json")

    def with_overrides(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Copy with command-line values applied; None values are skipped, sections merge."""
        data = self.to_dict()
        for key, value in overrides.items():
            if value is None:
                continue
            if isinstance(value, dict) and isinstance(data.get(key), dict):
                data[key].update({k: v for k, v in value.items() if v is not None})
            else:
                data[key] = value
        return _validated(RunConfig, data, "command-line options")

    def save(self, path: str) -> None:
        """Save config as JSON, or YAML for .yaml/.yml paths."""
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            if Path(path).suffix in (".yaml", ".yml"):
                if not YAML_AVAILABLE:
                    raise ConfigurationError("PyYAML is required for YAML config. Install with: pip install pyyaml")
                yaml.safe_dump(self.to_dict(), f, default_flow_style=False)
            else:
                json.dump(self.to_dict(), f, indent=2, sort_keys=True)

    def band_window(self) -> BandWindow:
        return BandWindow.parse(self.window)

    def resolve_constants_path(self, flag: Optional[str] = None) -> str:
        """--constants flag, then the config file, then DASF_CONSTANTS_PATH."""
        path = flag or self.constants_path or os.environ.get(CONSTANTS_ENV)
        if not path:
            raise ConfigurationError(
                f"no optical constants file: pass --constants, set constants_path in the config, "
                f"or set {CONSTANTS_ENV}"
            )
        return path

    def dc_model_coefficients(self) -> DcModelCoefficients:
        """Inline coefficients, a coefficients JSON path, or the built-in calibration."""
        value = self.dc_coefficients
        if value is None:
            return DEFAULT_DC_COEFFICIENTS
        if isinstance(value, str):
            value = _read_mapping(value)
            # fitted-coefficient files nest the values
            value = value.get("coefficients", value)
        return DcModelCoefficients.from_dict(value)


def _read_mapping(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"file not found: {path}")
    with open(path) as f:
        if path.suffix in (".yaml", ".yml"):
            if not YAML_AVAILABLE:
                raise ConfigurationError("PyYAML is required for YAML config. Install with: pip install pyyaml")
            data = yaml.safe_load(f)
        else:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{path}: invalid JSON ({exc})") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise DataFormatError(f"{path}: expected a JSON object")
    return data


def _validated(model, data: Dict[str, Any], source: str):
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"{source}: {exc}") from None
