"""End-to-end tests of the dasf command line."""

import json

import pandas as pd
import pytest

from conftest import write_library
from dasf_retrieval.canopy.invariant_model import si_forward_brf
from dasf_retrieval.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_PARTIAL, build_parser, main
from dasf_retrieval.models.canopy import SIForwardParams
from dasf_retrieval.models.spectrum import Spectrum
from dasf_retrieval.spectral.io import write_spectrum_csv


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    # no stray dasf.json or constants path from the environment
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DASF_CONSTANTS_PATH", raising=False)


@pytest.fixture
def reference_csv(tmp_path, varying_albedo):
    return write_spectrum_csv(varying_albedo, tmp_path / "reference.csv")


@pytest.fixture
def brf_csv(tmp_path, varying_albedo):
    brf = si_forward_brf(SIForwardParams(0.4, 0.6), varying_albedo)
    return write_spectrum_csv(brf, tmp_path / "brf.csv")


@pytest.fixture
def flat_csv(tmp_path):
    return write_spectrum_csv(Spectrum.constant(0.3), tmp_path / "flat.csv")


def stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestParser:
    def test_no_command_prints_help(self, capsys):
        assert main([]) == EXIT_OK
        assert "estimate" in capsys.readouterr().out

    def test_leaf_defaults_are_the_reference_leaf(self):
        args = build_parser().parse_args(["leaf"])
        assert (args.n_struct, args.cab, args.ewt, args.lma) == (1.5, 16.0, 0.005, 0.002)

    def test_bias_ratio_list(self):
        args = build_parser().parse_args(["bias-table", "--t-m", "0.5,2"])
        assert args.t_m == [0.5, 2.0]


class TestEstimate:
    def test_single_input(self, capsys, brf_csv, reference_csv):
        code = main(["estimate", brf_csv, "--method", "sdasf", "--reference-albedo", reference_csv, "-q"])
        assert code == EXIT_OK
        result = stdout_json(capsys)
        assert result["method"] == "sdasf"
        assert result["dasf"] == pytest.approx(1.0, abs=1e-8)
        assert result["k"] == pytest.approx(0.6, abs=1e-8)

    def test_all_methods_with_true_albedo(self, capsys, brf_csv, reference_csv):
        code = main([
            "estimate", brf_csv, "--method", "all", "--reference-albedo", reference_csv,
            "--true-albedo", reference_csv, "-q",
        ])
        assert code == EXIT_OK
        records = stdout_json(capsys)
        assert [r["method"] for r in records] == ["sdasf", "idasf", "dasf0"]
        assert "dc_coefficients" in records[1]
        assert records[2]["dasf"] == pytest.approx(1.0, abs=1e-8)

    def test_dasf0_needs_true_albedo(self, brf_csv, reference_csv):
        assert main(["estimate", brf_csv, "--method", "dasf0", "--reference-albedo", reference_csv]) == EXIT_CONFIG

    def test_partial_batch(self, capsys, brf_csv, flat_csv, reference_csv):
        code = main(["estimate", brf_csv, flat_csv, "--reference-albedo", reference_csv, "-q"])
        assert code == EXIT_PARTIAL
        entries = stdout_json(capsys)
        assert [e["input"] for e in entries] == [brf_csv, flat_csv]
        assert "estimates" in entries[0]
        assert "error" in entries[1]

    def test_degenerate_input(self, flat_csv, reference_csv):
        assert main(["estimate", flat_csv, "--reference-albedo", reference_csv, "-q"]) == EXIT_NUMERICAL

    def test_invalid_correction_reports_diagnostics(self, capsys, tmp_path, brf_csv, reference_csv):
        coeffs = tmp_path / "coeffs.json"
        coeffs.write_text(json.dumps({"c1": 0.0, "c2": 0.0, "c3": -50.0, "c4": 1.0}))
        code = main(["estimate", brf_csv, "--reference-albedo", reference_csv, "--dc-coeffs", str(coeffs), "-q"])
        assert code == EXIT_NUMERICAL
        report = stdout_json(capsys)
        assert report["diagnostics"]["k"] == pytest.approx(0.6, abs=1e-8)
        assert report["diagnostics"]["sdasf"] == pytest.approx(1.0, abs=1e-8)

    def test_missing_input(self, reference_csv):
        assert main(["estimate", "absent.csv", "--reference-albedo", reference_csv]) == EXIT_CONFIG

    def test_idasf_needs_2260_nm(self, tmp_path, varying_albedo, reference_csv):
        brf = si_forward_brf(SIForwardParams(0.4, 0.6), varying_albedo)
        frame = pd.DataFrame({"wavelength_nm": brf.wavelengths, "value": brf.values})
        short = tmp_path / "short.csv"
        frame[frame["wavelength_nm"] <= 1000].to_csv(short, index=False)
        assert main(["estimate", str(short), "--reference-albedo", reference_csv, "-q"]) == EXIT_CONFIG
        assert main(["estimate", str(short), "--method", "sdasf", "--reference-albedo", reference_csv, "-q"]) == EXIT_OK


class TestModelCommands:
    def test_missing_constants(self):
        assert main(["leaf", "--reference"]) == EXIT_CONFIG

    def test_reference_albedo_matches_reference_leaf(self, tmp_path, synthetic_constants_csv):
        out = tmp_path / "out"
        assert main(["leaf", "--reference", "--constants", synthetic_constants_csv, "-o", str(out), "-q"]) == EXIT_OK
        assert main(["leaf", "--constants", synthetic_constants_csv, "-o", str(out), "-q"]) == EXIT_OK
        assert (out / "reference_albedo.csv").read_bytes() == (out / "leaf_albedo.csv").read_bytes()
        assert (out / "leaf_reflectance.csv").is_file()
        assert not (out / "leaf_transformed_albedo.csv").exists()

    def test_surface_fraction_writes_transformed_albedo(self, tmp_path, synthetic_constants_csv):
        out = tmp_path / "out"
        code = main(["leaf", "--surface-fraction", "0.03", "--constants", synthetic_constants_csv, "-o", str(out), "-q"])
        assert code == EXIT_OK
        assert (out / "leaf_transformed_albedo.csv").is_file()

    def test_canopy_brf(self, tmp_path, synthetic_constants_csv):
        canopy = tmp_path / "canopy.json"
        canopy.write_text(json.dumps({"lai": 3.0, "lidf": "spherical"}))
        out = tmp_path / "out"
        code = main(["canopy", "--canopy", str(canopy), "--constants", synthetic_constants_csv, "-o", str(out), "-q"])
        assert code == EXIT_OK
        frame = pd.read_csv(out / "canopy_brf.csv")
        assert list(frame.columns) == ["wavelength_nm", "value"]
        assert len(frame) == 2101

    def test_bad_canopy_file(self, tmp_path, synthetic_constants_csv):
        canopy = tmp_path / "canopy.json"
        canopy.write_text(json.dumps({"lai": 30.0}))
        assert main(["canopy", "--canopy", str(canopy), "--constants", synthetic_constants_csv]) == EXIT_CONFIG

    def test_bias_table(self, tmp_path):
        out = tmp_path / "out"
        assert main(["bias-table", "--t-m", "1,2", "-o", str(out), "-q"]) == EXIT_OK
        frame = pd.read_csv(out / "bias_table.csv")
        assert frame["t_m"].tolist() == [1.0, 2.0]
        assert frame["ratio"].iloc[0] == pytest.approx(1.0, abs=1e-9)
        assert frame["dasf_prime"].iloc[1] == pytest.approx(0.43825, abs=1e-4)

    def test_unknown_config_key(self, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"sede": 1}))
        assert main(["bias-table", "-c", str(config)]) == EXIT_CONFIG


class TestCalibrate:
    def test_rerun_is_byte_identical(self, tmp_path, synthetic_constants_csv):
        outputs = []
        for threads in ("1", "3"):
            out = tmp_path / f"run{threads}"
            code = main([
                "calibrate", "--n", "60", "--seed", "5", "--threads", threads,
                "--constants", synthetic_constants_csv, "-o", str(out), "-q",
            ])
            assert code == EXIT_OK
            outputs.append(out)
        for name in ("training_cloud.csv", "dc_coefficients.json", "dc_fit_plot.json"):
            assert (outputs[0] / name).read_bytes() == (outputs[1] / name).read_bytes()
        fitted = json.loads((outputs[0] / "dc_coefficients.json").read_text())
        assert set(fitted["coefficients"]) == {"c1", "c2", "c3", "c4"}

    def test_too_few_leaves(self, tmp_path, synthetic_constants_csv):
        code = main(["calibrate", "--n", "20", "--constants", synthetic_constants_csv, "-o", str(tmp_path), "-q"])
        assert code == EXIT_CONFIG


class TestValidationCommands:
    def test_sweep_lai_axis(self, tmp_path, synthetic_constants_csv):
        out = tmp_path / "out"
        code = main([
            "sweep", "--axis", "lai", "--n", "10", "--subset", "4", "--threads", "2",
            "--constants", synthetic_constants_csv, "-o", str(out), "-q",
        ])
        assert code == EXIT_OK
        frame = pd.read_csv(out / "sweep_report.csv")
        assert len(frame) == 14
        assert frame["value"].drop_duplicates().tolist() == [1, 2, 3, 4, 5, 6, 7]
        assert frame.groupby("method").size().to_dict() == {"idasf": 7, "sdasf": 7}
        assert (frame["n_ok"] == 4).all()
        assert (out / "sweep_plot.json").is_file()

    def test_validate_measured(self, capsys, tmp_path, synthetic_constants_csv, reference_albedo):
        spectra_file, leaf_file = write_library(tmp_path, reference_albedo)
        out = tmp_path / "out"
        code = main([
            "validate-measured", "--spectra", str(spectra_file), "--leaf-file", str(leaf_file),
            "--constants", synthetic_constants_csv, "-o", str(out), "-q",
        ])
        assert code == EXIT_OK
        assert "MAE" in capsys.readouterr().out
        observations = pd.read_csv(out / "measured_observations.csv")
        assert len(observations) == 6
        assert (observations["sdasf"] - observations["dasf0"]).abs().max() < 1e-8
        plot = json.loads((out / "measured_plot.json").read_text())
        assert set(plot["species"]) == {"pine", "oak"}

    def test_validate_measured_needs_inputs(self, synthetic_constants_csv):
        assert main(["validate-measured", "--constants", synthetic_constants_csv]) == EXIT_CONFIG
