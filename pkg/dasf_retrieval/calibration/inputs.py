"""Default and user-supplied calibration inputs (constituent statistics, correlations)."""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import ConfigurationError, DataFormatError
from ..models.calibration import ConstituentRange, ConstituentStats, CorrelationMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class _RangeSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mean: float
    std: float = Field(gt=0.0)
    min: float
    max: float

    @model_validator(mode="after")
    def _ordered(self) -> "_RangeSchema":
        if not self.min < self.max:
            raise ValueError(f"min {self.min} must be below max {self.max}")
        if not self.min <= self.mean <= self.max:
            raise ValueError(f"mean {self.mean} outside [{self.min}, {self.max}]")
        return self


class _StatsSchema(BaseModel):
    model_config = ConfigDict(extra="ignore")

    cab: _RangeSchema
    car: _RangeSchema
    ewt: _RangeSchema
    lma: _RangeSchema


class _CorrelationSchema(BaseModel):
    model_config = ConfigDict(extra="ignore")

    pairs: Dict[str, float]


def _read_json(path: PathLike) -> Any:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"file not found: {path}")
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: invalid JSON ({exc})") from None


def _package_json(name: str) -> Any:
    with resources.files("dasf_retrieval.data").joinpath(name).open("r") as f:
        return json.load(f)


def stats_from_dict(data: Any) -> ConstituentStats:
    try:
        schema = _StatsSchema.model_validate(data)
    except ValidationError as exc:
        raise DataFormatError(f"invalid constituent statistics: {exc}") from None
    return ConstituentStats(**{
        name: ConstituentRange(**getattr(schema, name).model_dump()) for name in ("cab", "car", "ewt", "lma")
    })


def correlation_from_dict(data: Any) -> CorrelationMatrix:
    """Accepts {"pairs": {"cab-car": ...}} or a 4x4 nested list."""
    if isinstance(data, list):
        return CorrelationMatrix(data)
    try:
        schema = _CorrelationSchema.model_validate(data)
    except ValidationError as exc:
        raise DataFormatError(f"invalid correlation matrix: {exc}") from None
    return CorrelationMatrix.from_pairs(schema.pairs)


def load_stats(path: Optional[PathLike] = None) -> ConstituentStats:
    """Constituent statistics from a JSON file, or the packaged defaults."""
    data = _read_json(path) if path else _package_json("constituent_stats.json")
    stats = stats_from_dict(data)
    logger.debug("Constituent statistics from %s", path or "package defaults")
    return stats


def load_correlation(path: Optional[PathLike] = None) -> CorrelationMatrix:
    """Correlation matrix from a JSON file, or the packaged defaults."""
    data = _read_json(path) if path else _package_json("correlation.json")
    return correlation_from_dict(data)
