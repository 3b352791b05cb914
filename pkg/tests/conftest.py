"""Shared fixtures: a synthetic optical constants table and simple spectra."""

import math
import os

import numpy as np
import pandas as pd
import pytest

from dasf_retrieval.canopy.invariant_model import si_forward_brf
from dasf_retrieval.leaf.constants import load_constants
from dasf_retrieval.leaf.prospect import reference_albedo as _reference_albedo
from dasf_retrieval.models.canopy import SIForwardParams
from dasf_retrieval.models.spectrum import DEFAULT_GRID, Spectrum

REAL_CONSTANTS = os.environ.get("DASF_CONSTANTS_PATH")

requires_real_constants = pytest.mark.skipif(
    not REAL_CONSTANTS, reason="set DASF_CONSTANTS_PATH to run against real optical constants"
)


def _gauss(wl, centre, width):
    return np.exp(-0.5 * ((wl - centre) / width) ** 2)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def synthetic_constants_frame() -> pd.DataFrame:
    """Smooth absorption features at the right places; not real leaf constants."""
    wl = DEFAULT_GRID.wavelengths().astype(np.float64)
    return pd.DataFrame({
        "wavelength_nm": DEFAULT_GRID.wavelengths(),
        "n": 1.48 + 0.04 * np.exp(-(wl - 400.0) / 500.0),
        "k_cab": 0.07 * _gauss(wl, 435.0, 35.0) + 0.03 * _gauss(wl, 670.0, 30.0),
        "k_car": 0.05 * _gauss(wl, 470.0, 35.0),
        "k_anth": 0.03 * _gauss(wl, 540.0, 40.0),
        "k_brown": 0.5 * np.exp(-(wl - 400.0) / 200.0),
        "k_ewt": (
            0.002 + 0.45 * _gauss(wl, 970.0, 30.0) + 1.0 * _gauss(wl, 1200.0, 40.0)
            + 28.0 * _gauss(wl, 1450.0, 60.0) + 120.0 * _gauss(wl, 1940.0, 70.0)
            + 60.0 * _sigmoid((wl - 2300.0) / 60.0)
        ),
        "k_lma": 5.0 + 40.0 * _sigmoid((wl - 1200.0) / 150.0) + 110.0 * _gauss(wl, 2200.0, 200.0),
    })


@pytest.fixture(scope="session")
def synthetic_constants_csv(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("constants") / "synthetic_constants.csv"
    synthetic_constants_frame().to_csv(path, index=False)
    return str(path)


@pytest.fixture(scope="session")
def constants(synthetic_constants_csv):
    return load_constants(synthetic_constants_csv)


@pytest.fixture(scope="session")
def real_constants():
    if not REAL_CONSTANTS:
        pytest.skip("set DASF_CONSTANTS_PATH to run against real optical constants")
    return load_constants(REAL_CONSTANTS)


@pytest.fixture(scope="session")
def reference_albedo(constants) -> Spectrum:
    return _reference_albedo(constants)


@pytest.fixture
def ramp_spectrum() -> Spectrum:
    return Spectrum.from_function(lambda wl: wl / 2500.0)


@pytest.fixture
def varying_albedo() -> Spectrum:
    """Albedo that rises through the red edge and stays inside (0.1, 0.9)."""
    return Spectrum.from_function(lambda wl: 0.5 + 0.35 * np.tanh((wl - 720.0) / 40.0) + 0.02 * np.sin(wl / 7.0))


# (canopy_id, species, rho_i0, p) per synthetic goniometer canopy
MEASURED_CANOPIES = [("c01", "pine", 0.35, 0.7), ("c02", "oak", 0.45, 0.55)]
MEASURED_DIRECTIONS = [(-30.0, 0.0), (0.0, 0.0), (30.0, 180.0)]
# Goniometer layout: 8 nadir azimuths plus 8 x 6 oblique cells minus the two hot-spot cells
HOT_SPOT = {(15.0, 0.0), (30.0, 0.0)}
GONIOMETER_DIRECTIONS = [(0.0, 22.5 * i) for i in range(8)] + [
    (vza, raa)
    for vza in (-60.0, -45.0, -30.0, -15.0, 15.0, 30.0, 45.0, 60.0)
    for raa in (0.0, 30.0, 60.0, 90.0, 120.0, 150.0)
    if (vza, raa) not in HOT_SPOT
]


def write_library(directory, omega, canopies=MEASURED_CANOPIES, directions=MEASURED_DIRECTIONS, albedo_scale=1.0):
    """Goniometer CSVs of invariant-model canopies whose leaves all have albedo omega."""
    spectra, leaves = [], []
    wl = omega.wavelengths
    for canopy_id, species, rho_i0, p in canopies:
        for vza, raa in directions:
            # view dependence through rho_i0 only
            scale = 1.0 - 0.002 * abs(vza)
            brf = si_forward_brf(SIForwardParams(rho_i0 * scale, p), omega)
            spectra.append(pd.DataFrame({
                "canopy_id": canopy_id, "species": species, "vza_deg": vza, "raa_deg": raa,
                "wavelength_nm": wl, "dsc": brf.values / math.pi,
            }))
        for sample in ("s1", "s2"):
            for side in ("adaxial", "abaxial"):
                leaves.append(pd.DataFrame({
                    "canopy_id": canopy_id, "sample_id": sample, "side": side, "wavelength_nm": wl,
                    "dhrf": 0.5 * albedo_scale * omega.values, "dhtf": 0.5 * albedo_scale * omega.values,
                }))
    spectra_file = directory / "spectra.csv"
    leaf_file = directory / "leaves.csv"
    pd.concat(spectra).to_csv(spectra_file, index=False)
    pd.concat(leaves).to_csv(leaf_file, index=False)
    return spectra_file, leaf_file
