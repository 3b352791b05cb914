"""Tests for wavelength grids, band slicing, line fits and spectrum CSV I/O."""

import numpy as np
import pytest

from dasf_retrieval.errors import ConfigurationError, DataFormatError, DegenerateFitError, GridError
from dasf_retrieval.models.spectrum import DEFAULT_GRID, BandWindow, Spectrum, ViewGeometry, WavelengthGrid
from dasf_retrieval.spectral.core import at, linear_fit, slice_band
from dasf_retrieval.spectral.io import read_spectrum_csv, write_spectrum_csv


class TestGrid:
    def test_default_grid_has_2101_points(self):
        assert len(DEFAULT_GRID) == 2101
        assert DEFAULT_GRID.index(710) == 310

    def test_single_point_grid(self):
        assert len(WavelengthGrid(710, 710, 1)) == 1

    def test_off_grid_wavelength(self):
        grid = WavelengthGrid(400, 2500, 5)
        assert not grid.contains(711)
        with pytest.raises(GridError):
            grid.index(711)


class TestSliceBand:
    def test_default_window_has_81_points(self, ramp_spectrum):
        band = slice_band(ramp_spectrum, BandWindow())
        assert len(band) == 81
        assert band.grid.start_nm == 710 and band.grid.end_nm == 790

    def test_degenerate_window(self, ramp_spectrum):
        assert len(slice_band(ramp_spectrum, BandWindow(710, 710))) == 1

    def test_window_outside_grid(self, ramp_spectrum):
        with pytest.raises(GridError):
            slice_band(ramp_spectrum, BandWindow(300, 500))

    def test_inverted_window(self):
        with pytest.raises(ConfigurationError):
            BandWindow(790, 710)

    def test_window_parse(self):
        assert BandWindow.parse("700:800") == BandWindow(700, 800)
        with pytest.raises(ConfigurationError):
            BandWindow.parse("700-800")


class TestAt:
    @pytest.mark.parametrize("lo,hi", [(710, 790), (400, 2500), (2250, 2270), (1000, 1000)])
    def test_slice_then_at_matches_at(self, ramp_spectrum, lo, hi):
        band = slice_band(ramp_spectrum, BandWindow(lo, hi))
        for nm in range(lo, hi + 1, 7):
            assert at(band, nm) == at(ramp_spectrum, nm)
        assert at(band, hi) == at(ramp_spectrum, hi)

    def test_constant(self):
        assert at(Spectrum.constant(0.5), 2260) == 0.5

    def test_ramp(self, ramp_spectrum):
        assert at(ramp_spectrum, 710) == pytest.approx(0.284)

    def test_out_of_range(self, ramp_spectrum):
        with pytest.raises(GridError):
            at(ramp_spectrum, 2501)


class TestLinearFit:
    def test_exact_line(self):
        fit = linear_fit([0, 1, 2], [1, 3, 5])
        assert fit.slope == pytest.approx(2.0)
        assert fit.intercept == pytest.approx(1.0)
        assert fit.r2 == pytest.approx(1.0)

    def test_constant_y(self):
        fit = linear_fit([0, 1, 2], [5, 5, 5])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)
        assert fit.intercept == pytest.approx(5.0)
        assert fit.r2 == 1.0

    def test_degenerate_x(self):
        with pytest.raises(DegenerateFitError):
            linear_fit([1, 1, 1], [0, 1, 2])

    def test_too_few_points(self):
        with pytest.raises(DegenerateFitError):
            linear_fit([0, 1], [0, 1])

    def test_mismatched_lengths(self):
        with pytest.raises(ConfigurationError):
            linear_fit([0, 1, 2], [0, 1])

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_point_order_does_not_matter(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.uniform(0.0, 0.5, 81)
        y = 0.4 + 0.6 * x + rng.normal(0.0, 0.01, 81)
        order = rng.permutation(81)
        fit, shuffled = linear_fit(x, y), linear_fit(x[order], y[order])
        assert shuffled.slope == pytest.approx(fit.slope, abs=1e-12)
        assert shuffled.intercept == pytest.approx(fit.intercept, abs=1e-12)
        assert shuffled.r2 == pytest.approx(fit.r2, abs=1e-12)


class TestGeometry:
    def test_raa_is_folded(self):
        assert ViewGeometry(raa_deg=270.0).folded_raa_deg == pytest.approx(90.0)
        assert ViewGeometry(raa_deg=-30.0).folded_raa_deg == pytest.approx(30.0)

    def test_vza_range(self):
        with pytest.raises(ConfigurationError):
            ViewGeometry(vza_deg=90.0)


class TestSpectrumCsv:
    def test_write_then_read(self, tmp_path, ramp_spectrum):
        path = write_spectrum_csv(ramp_spectrum, tmp_path / "ramp.csv")
        loaded = read_spectrum_csv(path)
        assert loaded.grid == ramp_spectrum.grid
        assert np.array_equal(loaded.values, ramp_spectrum.values)

    def test_header(self, tmp_path, ramp_spectrum):
        path = write_spectrum_csv(ramp_spectrum, tmp_path / "ramp.csv")
        with open(path) as f:
            assert f.readline().strip() == "wavelength_nm,value"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_spectrum_csv(tmp_path / "missing.csv")

    def test_gap_in_wavelengths(self, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text("wavelength_nm,value\n700,0.1\n701,0.2\n703,0.3\n")
        with pytest.raises(DataFormatError):
            read_spectrum_csv(path)

    def test_non_numeric_value(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("wavelength_nm,value\n700,0.1\n701,abc\n702,0.3\n")
        with pytest.raises(DataFormatError):
            read_spectrum_csv(path)
