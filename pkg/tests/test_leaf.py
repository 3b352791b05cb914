"""Tests for optical constants, the plate model and within-leaf invariants."""

import math
from dataclasses import replace

import numpy as np
import pytest

from conftest import requires_real_constants, synthetic_constants_frame
from dasf_retrieval.errors import ConfigurationError, DataFormatError
from dasf_retrieval.leaf.constants import constants_summary, load_constants
from dasf_retrieval.leaf.invariants import (
    albedo_from_fundamental,
    albedo_with_surface,
    fit_p_leaf,
    fundamental_from_albedo,
    leaf_invariant_fit,
    power_approx,
    scaled_leaf_recollision,
    transformed_albedo_model,
    transformed_coefficients,
    transformed_from_albedo,
    within_leaf_models,
)
from dasf_retrieval.leaf.prospect import plate_transmissivity, prospect, reference_albedo
from dasf_retrieval.models.leaf import REFERENCE_BIOCHEM, FundamentalTerm, LeafBiochem
from dasf_retrieval.models.spectrum import BandWindow, Spectrum
from dasf_retrieval.spectral.core import at, slice_band


class TestLoadConstants:
    def test_full_grid(self, constants):
        assert len(constants.grid) == 2101
        assert constants.k_lma.shape == (2101,)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "constants.csv"
        synthetic_constants_frame().drop(columns=["k_lma"]).to_csv(path, index=False)
        with pytest.raises(DataFormatError, match="k_lma"):
            load_constants(path)

    def test_repeated_wavelength(self, tmp_path):
        frame = synthetic_constants_frame()
        frame.loc[101, "wavelength_nm"] = 500
        path = tmp_path / "constants.csv"
        frame.to_csv(path, index=False)
        with pytest.raises(DataFormatError):
            load_constants(path)

    def test_partial_coverage(self, tmp_path):
        path = tmp_path / "constants.csv"
        synthetic_constants_frame().iloc[:1000].to_csv(path, index=False)
        with pytest.raises(DataFormatError):
            load_constants(path)

    def test_negative_coefficient(self, tmp_path):
        frame = synthetic_constants_frame()
        frame.loc[10, "k_car"] = -0.1
        path = tmp_path / "constants.csv"
        frame.to_csv(path, index=False)
        with pytest.raises(DataFormatError):
            load_constants(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_constants(tmp_path / "nope.csv")

    def test_summary_reports_red_edge(self, constants):
        summary = constants_summary(constants)
        assert summary["grid"]["points"] == 2101
        assert summary["peaks"]["cab"]["at_nm"] == 435
        assert summary["red_edge"]["ok"]


class TestProspect:
    @pytest.mark.parametrize("n_struct", [1.0, 1.5, 2.5])
    def test_zero_absorption_conserves_energy(self, constants, n_struct):
        optics = prospect(LeafBiochem(n_struct=n_struct), constants)
        assert len(optics.albedo) == 2101
        assert np.max(np.abs(optics.reflectance.values + optics.transmittance.values - 1.0)) < 1e-6

    def test_opaque_limit(self, constants):
        optics = prospect(LeafBiochem(n_struct=1.5, cab=1e4), constants)
        assert at(optics.transmittance, 680) < 1e-3

    def test_albedo_is_r_plus_t(self, constants):
        optics = prospect(LeafBiochem(n_struct=1.8, cab=40, car=9, ewt=0.013, lma=0.006), constants)
        assert np.allclose(optics.albedo.values, optics.reflectance.values + optics.transmittance.values)
        assert np.all(optics.albedo.values > 0.0)
        assert np.all(optics.albedo.values <= 1.0)

    def test_more_chlorophyll_absorbs_more(self, constants):
        low = prospect(LeafBiochem(cab=20), constants)
        high = prospect(LeafBiochem(cab=60), constants)
        assert at(high.albedo, 680) < at(low.albedo, 680)

    @pytest.mark.parametrize("absorber", ["cab", "car", "anth", "brown", "ewt", "lma"])
    @pytest.mark.parametrize("factor", [1.25, 2.0, 5.0])
    def test_more_of_any_absorber_never_raises_albedo(self, constants, absorber, factor):
        base = LeafBiochem(n_struct=1.5, cab=40.0, car=9.0, anth=2.0, brown=0.1, ewt=0.013, lma=0.006)
        more = replace(base, **{absorber: factor * getattr(base, absorber)})
        delta = prospect(more, constants).albedo.values - prospect(base, constants).albedo.values
        assert delta.max() <= 1e-12

    def test_reference_albedo_is_reference_leaf(self, constants):
        assert reference_albedo(constants).allclose(prospect(REFERENCE_BIOCHEM, constants).albedo)

    def test_plate_transmissivity_limits(self):
        values = plate_transmissivity(np.array([0.0, 1e-3, 50.0]))
        assert values[0] == 1.0
        assert 0.99 < values[1] < 1.0
        assert values[2] < 1e-20

    def test_surface_fraction_range(self, constants):
        with pytest.raises(ConfigurationError):
            prospect(REFERENCE_BIOCHEM, constants, surface_fraction=0.2)

    def test_negative_constituent(self):
        with pytest.raises(ConfigurationError):
            LeafBiochem(cab=-1.0)


class TestWithinLeafFit:
    def test_identity_leaf(self, varying_albedo):
        fit = leaf_invariant_fit(varying_albedo, varying_albedo)
        assert fit.p == pytest.approx(0.0, abs=1e-12)
        assert fit.r == pytest.approx(1.0, abs=1e-12)
        assert fit.epsilon == pytest.approx(0.0, abs=1e-12)

    def test_recovers_constructed_line(self, varying_albedo):
        r, p = 0.8, 0.25
        leaf = varying_albedo.map(lambda v: r * v / (1.0 - p * v))
        fit = leaf_invariant_fit(leaf, varying_albedo)
        assert fit.r == pytest.approx(r, abs=1e-9)
        assert fit.p == pytest.approx(p, abs=1e-9)
        assert fit.epsilon == pytest.approx(r + p - 1.0, abs=1e-9)


class TestFundamentalTerm:
    def test_no_recollision(self, varying_albedo):
        assert fundamental_from_albedo(varying_albedo, 0.0).w_leaf.allclose(varying_albedo)

    def test_non_absorbing(self):
        w = fundamental_from_albedo(Spectrum.constant(1.0), 0.7).w_leaf
        assert np.allclose(w.values, 1.0)

    def test_albedo_from_fundamental(self):
        albedo = albedo_from_fundamental(FundamentalTerm(Spectrum.constant(0.5), 0.9))
        assert albedo.values[0] == pytest.approx(0.05 / 0.55)
        assert np.allclose(albedo_from_fundamental(FundamentalTerm(Spectrum.constant(1.0), 0.9)).values, 1.0)

    @pytest.mark.parametrize("p_leaf", [0.0, 0.5, 0.9, 0.99])
    def test_round_trip(self, varying_albedo, p_leaf):
        back = albedo_from_fundamental(fundamental_from_albedo(varying_albedo, p_leaf))
        assert np.max(np.abs(back.values - varying_albedo.values)) < 1e-12

    def test_p_leaf_range(self, varying_albedo):
        with pytest.raises(ConfigurationError):
            fundamental_from_albedo(varying_albedo, 1.0)

    def test_power_approx_fixed_points(self, varying_albedo):
        assert power_approx(varying_albedo, 1.0).allclose(varying_albedo)
        assert np.allclose(power_approx(Spectrum.constant(1.0), 2.0).values, 1.0)

    def test_power_approx_deviation_near_one(self):
        grid = slice_band(Spectrum.constant(1.0), BandWindow()).grid
        for w_min, bound in ((0.9, 0.06), (0.97, 0.01)):
            w = Spectrum(grid, np.linspace(w_min, 1.0, len(grid)))
            worst = max(
                np.max(np.abs(power_approx(w, t_c).values / w.values ** t_c - 1.0))
                for t_c in np.linspace(0.5, 4.0, 36)
            )
            assert worst < bound, (w_min, worst)

    def test_power_approx_is_exact_at_unit_power_and_worst_at_high_power(self):
        w = Spectrum.constant(0.9)

        def deviation(t_c):
            return abs(power_approx(w, t_c).values[0] / 0.9 ** t_c - 1.0)

        assert deviation(1.0) == 0.0
        assert deviation(4.0) == pytest.approx(0.225 / 0.325 / 0.6561 - 1.0, rel=1e-9)
        assert deviation(0.5) < deviation(2.0) < deviation(4.0)

    def test_fit_p_leaf_recovers_constructed_leaf(self, constants):
        w = Spectrum(constants.grid, np.exp(-40.0 * constants.k_cab - 0.05))
        albedo = albedo_from_fundamental(FundamentalTerm(w, 0.6))
        assert fit_p_leaf(albedo, constants) == pytest.approx(0.6, abs=0.05)


class TestClosedFormRelations:
    def test_reference_chlorophyll(self):
        models = within_leaf_models(16.0, 0.002)
        assert models.p0 == pytest.approx(0.06875)
        assert models.p == pytest.approx(0.000625)
        assert models.r == pytest.approx(0.921875)
        assert models.k_line == pytest.approx(0.99836)
        assert models.b_line == pytest.approx(0.00168)

    def test_non_green_leaf(self):
        with pytest.raises(ConfigurationError):
            within_leaf_models(5.0, 0.002)

    def test_transformed_coefficients(self):
        a, q, b = transformed_coefficients(1.0, 2.0, 0.05, 0.9)
        assert a == pytest.approx(math.exp(-0.05))
        assert q == 0.0
        assert b == pytest.approx(-0.43894, abs=1e-4)

    def test_reference_leaf_reproduces_itself(self, varying_albedo):
        assert transformed_albedo_model(varying_albedo, 1.0, 1.0, 0.05, 0.9).allclose(varying_albedo)

    def test_dry_matter_neutral_case(self, varying_albedo):
        leaf = transformed_albedo_model(varying_albedo, 2.0, 2.0, 0.05, 0.9)
        a, q, _ = transformed_coefficients(2.0, 2.0, 0.05, 0.9)
        assert a == 1.0
        assert q == 0.5
        assert np.all(leaf.values <= varying_albedo.values + 1e-12)

    @pytest.mark.parametrize("t", [0.5, 1.5, 2.0, 3.0])
    @pytest.mark.parametrize("p_leaf", [0.0, 0.6, 0.9])
    def test_dry_matter_neutral_matches_scaled_recollision_form(self, varying_albedo, t, p_leaf):
        q = scaled_leaf_recollision(t)
        direct = (1.0 - q) * varying_albedo.values / (1.0 - q * varying_albedo.values)
        leaf = transformed_albedo_model(varying_albedo, t, t, 0.05, p_leaf)
        assert np.max(np.abs(leaf.values - direct)) < 1e-12

    def test_surface_reflection_round_trip(self, varying_albedo):
        with_surface = albedo_with_surface(varying_albedo, 0.03)
        assert transformed_from_albedo(with_surface, 0.03).allclose(varying_albedo)

    def test_scaled_leaf_recollision(self):
        assert scaled_leaf_recollision(1.0) == 0.0
        assert scaled_leaf_recollision(2.0) == pytest.approx(0.5)
        assert scaled_leaf_recollision(0.5) == pytest.approx(-1.0)


@requires_real_constants
def test_reference_albedo_red_edge_on_real_constants(real_constants):
    omega_r = reference_albedo(real_constants)
    assert slice_band(omega_r, BandWindow()).values.max() > at(omega_r, 680)
