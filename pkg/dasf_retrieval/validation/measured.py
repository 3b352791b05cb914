"""Measured multi-angular canopy libraries: ingestion and estimator validation."""

import logging
import math
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..analysis.regression import DC_BANDS_NM, dasf0_from_true_albedo, idasf, sdasf
from ..errors import DataFormatError, GridError
from ..leaf.prospect import reference_albedo
from ..models.estimates import DcModelCoefficients
from ..models.leaf import OpticalConstants
from ..models.spectrum import BandWindow, Spectrum
from ..models.validation import (
    EXPECTED_DIRECTIONS, AngleMap, Direction, MeasuredCanopy, MeasuredReport,
    Observation, Species, SpeciesSummary,
)
from ..processing.batch import BatchProcessor
from ..spectral.io import grid_from_wavelengths, read_csv_frame
from .metrics import mae

logger = logging.getLogger(__name__)

SPECTRA_COLUMNS = ("canopy_id", "species", "vza_deg", "raa_deg", "wavelength_nm", "dsc")
LEAF_COLUMNS = ("canopy_id", "sample_id", "side", "wavelength_nm", "dhrf", "dhtf")
HISTOGRAM_BINS = 20

PathLike = Union[str, Path]


def _numeric(frame: pd.DataFrame, columns: Sequence[str], source: PathLike) -> pd.DataFrame:
    frame = frame.copy()
    for column in columns:
        frame[column] = pd.to_numeric(frame[column], errors="coerce")
        if frame[column].isna().any():
            raise DataFormatError(f"{source}: column {column} has missing or non-numeric values")
    return frame


def _spectrum(group: pd.DataFrame, value_column: str, source: str) -> Spectrum:
    group = group.sort_values("wavelength_nm", kind="stable")
    grid = grid_from_wavelengths(group["wavelength_nm"].to_numpy(), source)
    return Spectrum(grid, group[value_column].to_numpy(dtype=np.float64))


def _leaf_albedos(path: PathLike) -> Dict[str, Spectrum]:
    frame = _numeric(read_csv_frame(path, LEAF_COLUMNS), ("wavelength_nm", "dhrf", "dhtf"), path)
    frame["canopy_id"] = frame["canopy_id"].astype(str)
    frame["albedo"] = frame["dhrf"] + frame["dhtf"]
    if (frame["albedo"] > 1.0 + 1e-6).any():
        bad = frame.loc[frame["albedo"] > 1.0 + 1e-6].iloc[0]
        raise DataFormatError(
            f"{path}: DHRF + DHTF = {bad['albedo']:.6g} > 1 for canopy {bad['canopy_id']} at {bad['wavelength_nm']} nm"
        )
    albedos = {}
    for canopy_id, group in frame.groupby("canopy_id", sort=True):
        # average over samples and sides
        mean = group.groupby("wavelength_nm", sort=True)["albedo"].mean().reset_index()
        albedos[canopy_id] = _spectrum(mean, "albedo", f"{path} [{canopy_id}]")
    return albedos


def ingest_measured_library(spectra_file: PathLike, leaf_file: PathLike) -> List[MeasuredCanopy]:
    """
    Load goniometer canopies with their leaf albedos.

    BRF = pi * DSC per direction; the leaf albedo is the mean of
    DHRF + DHTF over samples and sides. Canopies come back sorted by id.
    """
    frame = _numeric(
        read_csv_frame(spectra_file, SPECTRA_COLUMNS), ("vza_deg", "raa_deg", "wavelength_nm", "dsc"), spectra_file
    )
    if (frame["dsc"] < 0.0).any():
        raise DataFormatError(f"{spectra_file}: negative DSC values")
    frame["canopy_id"] = frame["canopy_id"].astype(str)
    albedos = _leaf_albedos(leaf_file)

    canopies = []
    for canopy_id, group in frame.groupby("canopy_id", sort=True):
        if canopy_id not in albedos:
            raise DataFormatError(f"{leaf_file}: no leaf data for canopy {canopy_id}")
        species = Species.parse(group["species"].iloc[0])
        brf: Dict[Direction, Spectrum] = {}
        for (vza, raa), direction in group.groupby(["vza_deg", "raa_deg"], sort=True):
            key = (float(vza), float(raa))
            direction = direction.assign(brf=direction["dsc"] * math.pi)
            brf[key] = _spectrum(direction, "brf", f"{spectra_file} [{canopy_id} {key}]")
        if len(brf) < EXPECTED_DIRECTIONS:
            logger.warning(
                "Canopy %s has %d view directions (expected %d)", canopy_id, len(brf), EXPECTED_DIRECTIONS
            )
        canopies.append(MeasuredCanopy(canopy_id, species, albedos[canopy_id], brf))
    logger.info("Ingested %d measured canopies from %s", len(canopies), spectra_file)
    return canopies


def _check_coverage(canopy: MeasuredCanopy, w: BandWindow) -> None:
    for direction, spectrum in canopy.brf.items():
        for nm in (w.lo_nm, w.hi_nm) + DC_BANDS_NM:
            if not spectrum.grid.contains(nm):
                raise GridError(f"canopy {canopy.canopy_id} direction {direction}: no BRF at {nm} nm")


def _observe(
    canopy: MeasuredCanopy, direction: Direction, omega_r: Spectrum, coeffs: DcModelCoefficients, w: BandWindow
) -> Observation:
    brf = canopy.brf[direction]
    return Observation(
        canopy_id=canopy.canopy_id,
        species=canopy.species,
        direction=direction,
        dasf0=dasf0_from_true_albedo(brf, canopy.leaf_albedo, w).value,
        sdasf=sdasf(brf, omega_r, w).value,
        idasf=idasf(brf, omega_r, coeffs, w).value,
    )


def _angle_map(species: Species, observations: Sequence[Observation], value) -> AngleMap:
    cells: Dict[Direction, List[float]] = defaultdict(list)
    for obs in observations:
        cells[obs.direction].append(value(obs))
    return AngleMap(species, {d: float(np.mean(v)) for d, v in sorted(cells.items())})


def _summary(species: Species, observations: Sequence[Observation]) -> SpeciesSummary:
    ok = [o for o in observations if o.ok]
    failed = len(observations) - len(ok)
    if not ok:
        return SpeciesSummary(species, float("nan"), float("nan"), 0, failed)
    ae_s = np.array([o.ae_sdasf for o in ok])
    ae_i = np.array([o.ae_idasf for o in ok])
    top = float(max(ae_s.max(), ae_i.max()))
    edges = np.linspace(0.0, top if top > 0.0 else 1.0, HISTOGRAM_BINS + 1)
    reference = [o.dasf0 for o in ok]
    return SpeciesSummary(
        species=species,
        mae_sdasf=mae([o.sdasf for o in ok], reference),
        mae_idasf=mae([o.idasf for o in ok], reference),
        n_observations=len(ok),
        n_failed=failed,
        histogram_edges=edges.tolist(),
        histogram_sdasf=np.histogram(ae_s, bins=edges)[0].tolist(),
        histogram_idasf=np.histogram(ae_i, bins=edges)[0].tolist(),
    )


def validate_measured(
    canopies: Sequence[MeasuredCanopy],
    coeffs: DcModelCoefficients,
    oc: OpticalConstants,
    w: BandWindow = BandWindow(),
    omega_r: Optional[Spectrum] = None,
    processor: Optional[BatchProcessor] = None,
) -> MeasuredReport:
    """
    Compare sDASF and iDASF with DASF0 for every (canopy, direction).

    Args:
        canopies: Measured canopies
        coeffs: DC model coefficients
        oc: Optical constants for the reference albedo
        w: Regression window
        omega_r: Reference albedo override (defaults to the plate model's)
        processor: Worker pool

    Returns:
        MeasuredReport with per-species MAE, AE histograms and angle maps
    """
    for canopy in canopies:
        _check_coverage(canopy, w)
    omega_r = omega_r if omega_r is not None else reference_albedo(oc)
    processor = processor or BatchProcessor(label="measured")
    items: List[Tuple[MeasuredCanopy, Direction]] = [
        (canopy, direction) for canopy in canopies for direction in sorted(canopy.brf)
    ]
    results = processor.map_ordered(lambda item: _observe(item[0], item[1], omega_r, coeffs, w), items)

    observations = []
    for (canopy, direction), result in zip(items, results):
        if result.ok:
            observations.append(result.value)
        else:
            observations.append(Observation(
                canopy.canopy_id, canopy.species, direction, error=str(result.error)
            ))

    summaries, delta_maps, dasf0_maps = {}, {}, {}
    for species in Species:
        members = [o for o in observations if o.species is species]
        if not members:
            continue
        summaries[species] = _summary(species, members)
        ok = [o for o in members if o.ok]
        delta_maps[species] = _angle_map(species, ok, lambda o: o.ae_idasf - o.ae_sdasf)
        dasf0_maps[species] = _angle_map(species, ok, lambda o: o.dasf0)
        s = summaries[species]
        logger.info(
            "%s: MAE sDASF %.4f, iDASF %.4f (%.1f%% lower) over %d observations",
            species.value, s.mae_sdasf, s.mae_idasf, s.mae_reduction_pct, s.n_observations,
        )
    return MeasuredReport(observations, summaries, delta_maps, dasf0_maps)
