"""Tests for run configuration loading, validation and overrides."""

import json

import pytest

from dasf_retrieval.config import CanopySettings, RunConfig
from dasf_retrieval.errors import ConfigurationError, DataFormatError
from dasf_retrieval.models.canopy import LidfKind
from dasf_retrieval.models.estimates import DEFAULT_DC_COEFFICIENTS
from dasf_retrieval.models.spectrum import BandWindow


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.seed == 2024
        assert cfg.band_window() == BandWindow(710, 790)
        assert cfg.canopy.lai == 5.0
        assert cfg.calibration.n == 2000
        assert cfg.dc_model_coefficients() == DEFAULT_DC_COEFFICIENTS

    def test_from_file(self, tmp_path):
        path = tmp_path / "dasf.json"
        path.write_text(json.dumps({"seed": 7, "canopy": {"lai": 3.0, "lidf": "erectophile"}}))
        cfg = RunConfig.load(str(path))
        assert cfg.seed == 7
        structure = cfg.canopy.to_structure()
        assert structure.lai == 3.0
        assert (structure.lidf_a, structure.lidf_b) == LidfKind.ERECTOPHILE.parameters

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict({"sede": 1})

    def test_invalid_values_rejected(self):
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict({"canopy": {"lai": -1.0}})
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict({"sweep": {"axis": "soil"}})
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict({"canopy": {"lidf": "conical"}})

    def test_bad_window(self):
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict({"window": "790:710"})

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            RunConfig.load(str(tmp_path / "absent.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{seed: 1")
        with pytest.raises(DataFormatError):
            RunConfig.from_file(path)

    def test_overrides(self):
        cfg = RunConfig.from_dict({"canopy": {"lai": 3.0}, "calibration": {"n": 500}})
        updated = cfg.with_overrides({
            "seed": 11,
            "threads": None,
            "canopy": {"vza_deg": 20.0, "lai": None},
            "calibration": {"two_stage": True},
        })
        assert updated.seed == 11
        assert updated.threads is None
        assert updated.canopy.lai == 3.0
        assert updated.canopy.vza_deg == 20.0
        assert updated.calibration.n == 500 and updated.calibration.two_stage
        assert cfg.seed == 2024

    def test_invalid_override(self):
        with pytest.raises(ConfigurationError):
            RunConfig().with_overrides({"threads": 0})

    def test_save_and_reload(self, tmp_path):
        cfg = RunConfig.from_dict({"seed": 3, "window": "700:780"})
        path = tmp_path / "saved.json"
        cfg.save(str(path))
        assert RunConfig.from_file(path) == cfg

    def test_inline_coefficients(self):
        cfg = RunConfig.from_dict({"dc_coefficients": {"c1": 9.0, "c2": -15.0, "c3": -3.5, "c4": -0.02}})
        assert cfg.dc_model_coefficients().as_tuple() == (9.0, -15.0, -3.5, -0.02)

    def test_coefficients_file(self, tmp_path):
        path = tmp_path / "dc_coefficients.json"
        path.write_text(json.dumps({
            "coefficients": {"c1": 8.5, "c2": -14.0, "c3": -3.4, "c4": -0.01},
            "fit_report": {"rmse": 0.01},
        }))
        cfg = RunConfig.from_dict({"dc_coefficients": str(path)})
        assert cfg.dc_model_coefficients().c1 == 8.5

    def test_constants_resolution(self, monkeypatch):
        monkeypatch.delenv("DASF_CONSTANTS_PATH", raising=False)
        cfg = RunConfig()
        with pytest.raises(ConfigurationError):
            cfg.resolve_constants_path()
        monkeypatch.setenv("DASF_CONSTANTS_PATH", "/data/env.csv")
        assert cfg.resolve_constants_path() == "/data/env.csv"
        assert RunConfig(constants_path="/data/cfg.csv").resolve_constants_path() == "/data/cfg.csv"
        assert cfg.resolve_constants_path("/data/flag.csv") == "/data/flag.csv"


class TestCanopySettings:
    def test_explicit_lidf_parameters(self):
        settings = CanopySettings.model_validate({"lidf": {"a": 0.5, "b": 0.0}})
        structure = settings.to_structure()
        assert (structure.lidf_a, structure.lidf_b) == (0.5, 0.0)

    def test_geometry(self):
        g = CanopySettings(sza_deg=40.0, vza_deg=10.0, raa_deg=90.0).to_geometry()
        assert (g.sza_deg, g.vza_deg, g.raa_deg) == (40.0, 10.0, 90.0)

    def test_black_soil(self):
        assert CanopySettings().soil_spectrum() is None

    def test_soil_file_must_exist(self, tmp_path):
        with pytest.raises(ConfigurationError):
            CanopySettings(soil=str(tmp_path / "soil.csv")).soil_spectrum()

    def test_from_file(self, tmp_path):
        path = tmp_path / "canopy.json"
        path.write_text(json.dumps({"lai": 2.5, "hotspot": 0.05}))
        settings = CanopySettings.from_file(path)
        assert settings.lai == 2.5 and settings.hotspot == 0.05
