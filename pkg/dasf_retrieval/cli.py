"""Command-line interface for DASF retrieval."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .analysis.bias import bias_curve
from .analysis.regression import estimate_batch
from .calibration.dc_fit import fit_dc_model, fit_dc_model_two_stage
from .calibration.inputs import load_correlation, load_stats
from .calibration.sampler import sample_leaves
from .calibration.training import build_training_set
from .calibration.within_leaf import fit_within_leaf_relations
from .canopy.sail import four_stream, non_absorbing_brf
from .config import CanopySettings, RunConfig
from .errors import ConfigurationError, DasfError, DataFormatError, EstimatorError, NumericalError
from .export.csv_exporter import CSVExporter
from .export.json_exporter import dumps
from .export.report import ReportGenerator
from .leaf.constants import constants_summary, load_constants
from .leaf.prospect import prospect, reference_albedo
from .models.canopy import LidfKind, SIForwardParams
from .models.estimates import EstimateMethod
from .models.leaf import REFERENCE_BIOCHEM, LeafBiochem, OpticalConstants
from .models.spectrum import Spectrum
from .models.validation import SweepAxis, SweepConfig
from .processing.batch import BatchProcessor
from .spectral.core import at
from .spectral.io import read_spectrum_csv
from .validation.measured import ingest_measured_library, validate_measured
from .validation.sweep import run_sweep, summarize_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4

console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger(__name__)
_log_handler: Optional[logging.Handler] = None


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Attach one rich handler (stderr) to the package logger."""
    global _log_handler
    package_logger = logging.getLogger("dasf_retrieval")
    if _log_handler is not None:
        package_logger.removeHandler(_log_handler)
    _log_handler = RichHandler(console=err_console, show_time=False, show_path=False, markup=False)
    package_logger.addHandler(_log_handler)
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO)


def build_config(args) -> RunConfig:
    """Config file (or defaults) with the command-line flags applied on top."""
    cfg = RunConfig.load(args.config)

    def option(name: str):
        return getattr(args, name, None)

    canopy = CanopySettings.from_file(args.canopy).model_dump(mode="json") if option("canopy") else None
    return cfg.with_overrides({
        "threads": option("threads"),
        "output_dir": option("output_dir"),
        "seed": option("seed"),
        "window": option("window"),
        "dc_coefficients": option("dc_coeffs"),
        "canopy": canopy,
        "calibration": {
            "n": option("n"),
            "stats": option("stats"),
            "corr": option("corr"),
            "two_stage": option("two_stage") or None,
            "within_leaf": option("within_leaf") or None,
        },
        "sweep": {"axis": option("axis"), "subset": option("subset")},
        "measured": {"spectra_file": option("spectra"), "leaf_file": option("leaf_file")},
    })


def _constants(cfg: RunConfig, args) -> OpticalConstants:
    return load_constants(cfg.resolve_constants_path(args.constants))


def _biochem(args) -> LeafBiochem:
    return LeafBiochem(
        n_struct=args.n_struct, cab=args.cab, car=args.car, anth=args.anth,
        brown=args.brown, ewt=args.ewt, lma=args.lma,
    )


def _processor(cfg: RunConfig, label: str) -> BatchProcessor:
    return BatchProcessor(threads=cfg.threads, label=label)


def run_constants_check(args, cfg: RunConfig) -> int:
    """Validate a constants file and show its summary."""
    summary = constants_summary(_constants(cfg, args))
    grid = summary["grid"]
    table = Table(title="Optical constants", box=box.ROUNDED)
    table.add_column("Series", style="bold cyan")
    table.add_column("Max", justify="right")
    table.add_column("At (nm)", justify="right")
    for name, peak in summary["peaks"].items():
        table.add_row(f"k_{name}", f"{peak['max']:.4g}", str(peak["at_nm"]))
    console.print(table)
    console.print(
        f"Grid {grid['start_nm']}-{grid['end_nm']} nm ({grid['points']} points), "
        f"n in [{summary['n_range'][0]:.4f}, {summary['n_range'][1]:.4f}]"
    )
    edge = summary["red_edge"]
    if not edge["ok"]:
        raise DataFormatError(
            f"reference albedo has no red edge: {edge['albedo_window_max']:.4f} at 710-790 nm "
            f"vs {edge['albedo_680']:.4f} at 680 nm"
        )
    console.print("[green]Reference albedo red edge OK[/green]")
    return EXIT_OK


def run_leaf(args, cfg: RunConfig) -> int:
    """Write leaf R/T/albedo spectra, or the reference albedo."""
    oc = _constants(cfg, args)
    exporter = CSVExporter(cfg.output_dir)
    if args.reference:
        path = exporter.export_spectrum(reference_albedo(oc), "reference_albedo.csv")
        console.print(f"Reference albedo ({REFERENCE_BIOCHEM.cab:g} ug/cm2 Cab) written to {path}")
        return EXIT_OK

    optics = prospect(_biochem(args), oc, surface_fraction=args.surface_fraction)
    exporter.export_spectrum(optics.reflectance, "leaf_reflectance.csv")
    exporter.export_spectrum(optics.transmittance, "leaf_transmittance.csv")
    exporter.export_spectrum(optics.albedo, "leaf_albedo.csv")
    if optics.surface_fraction > 0.0:
        exporter.export_spectrum(optics.transformed_albedo(), "leaf_transformed_albedo.csv")

    table = Table(title="Leaf optics", box=box.ROUNDED)
    table.add_column("nm", justify="right", style="bold cyan")
    for column in ("R", "T", "albedo"):
        table.add_column(column, justify="right")
    for nm in (550, 680, 750, 1450, 2260):
        if optics.grid.contains(nm):
            table.add_row(
                str(nm), f"{at(optics.reflectance, nm):.4f}", f"{at(optics.transmittance, nm):.4f}",
                f"{at(optics.albedo, nm):.4f}",
            )
    console.print(table)
    return EXIT_OK


def run_canopy(args, cfg: RunConfig) -> int:
    """Canopy BRF for a leaf biochemistry and the configured canopy."""
    oc = _constants(cfg, args)
    structure, geometry = cfg.canopy.to_structure(), cfg.canopy.to_geometry()
    if args.non_absorbing:
        value = non_absorbing_brf(structure, geometry, oc.grid)
        console.print(f"Non-absorbing BRF (DASF): {value:.6f}")
        return EXIT_OK

    optics = prospect(_biochem(args), oc, surface_fraction=args.surface_fraction)
    result = four_stream(optics, structure, geometry, cfg.canopy.soil_spectrum())
    path = CSVExporter(cfg.output_dir).export_spectrum(result.brf, "canopy_brf.csv")
    console.print(
        f"Canopy BRF (LAI {structure.lai:g}, SZA {geometry.sza_deg:g}, VZA {geometry.vza_deg:g}): "
        f"{at(result.brf, 800):.4f} at 800 nm -> {path}"
    )
    return EXIT_OK


def _estimate_methods(name: str, have_truth: bool) -> List[EstimateMethod]:
    if name != "all":
        return [EstimateMethod(name)]
    methods = [EstimateMethod.SDASF, EstimateMethod.IDASF]
    if have_truth:
        methods.append(EstimateMethod.DASF0)
    return methods


def _estimate_record(estimate, coeffs_dict: Dict[str, float]) -> Dict[str, Any]:
    record = estimate.to_dict()
    if estimate.method is EstimateMethod.IDASF:
        record["dc_coefficients"] = coeffs_dict
    return record


def run_estimate(args, cfg: RunConfig) -> int:
    """Estimate DASF from BRF spectrum CSVs; JSON on stdout."""
    w = cfg.band_window()
    coeffs = cfg.dc_model_coefficients()
    if args.reference_albedo:
        omega_r = read_spectrum_csv(args.reference_albedo)
    else:
        omega_r = reference_albedo(_constants(cfg, args))
    brfs = [read_spectrum_csv(path) for path in args.inputs]
    truths: Optional[List[Spectrum]] = None
    if args.true_albedo:
        if len(args.true_albedo) not in (1, len(brfs)):
            raise ConfigurationError("give one --true-albedo file, or one per input")
        loaded = [read_spectrum_csv(path) for path in args.true_albedo]
        truths = loaded * len(brfs) if len(loaded) == 1 else loaded
    if args.method == "dasf0" and truths is None:
        raise ConfigurationError("--method dasf0 needs --true-albedo")
    methods = _estimate_methods(args.method, truths is not None)

    results = estimate_batch(brfs, omega_r, coeffs, w, methods, truths, _processor(cfg, "estimate"))
    coeffs_dict = coeffs.to_dict()

    if len(results) == 1:
        result = results[0]
        if not result.ok:
            if isinstance(result.error, EstimatorError):
                console.out(dumps({"error": str(result.error), "diagnostics": result.error.diagnostics}))
            raise result.error
        records = [_estimate_record(e, coeffs_dict) for e in result.value]
        console.out(dumps(records[0] if len(records) == 1 else records))
        return EXIT_OK

    output = []
    for path, result in zip(args.inputs, results):
        if result.ok:
            output.append({"input": path, "estimates": [_estimate_record(e, coeffs_dict) for e in result.value]})
        else:
            entry: Dict[str, Any] = {"input": path, "error": str(result.error)}
            if isinstance(result.error, EstimatorError):
                entry["diagnostics"] = result.error.diagnostics
            output.append(entry)
    console.out(dumps(output))
    return EXIT_PARTIAL if any(not r.ok for r in results) else EXIT_OK


def _leaf_population(cfg: RunConfig):
    stats = load_stats(cfg.calibration.stats)
    corr = load_correlation(cfg.calibration.corr)
    return sample_leaves(stats, corr, cfg.calibration.n, cfg.seed)


def run_calibrate(args, cfg: RunConfig) -> int:
    """Training cloud and DC model refit."""
    oc = _constants(cfg, args)
    leaves = _leaf_population(cfg)
    processor = _processor(cfg, "training")
    records = build_training_set(
        leaves, cfg.canopy.to_structure(), cfg.canopy.to_geometry(), oc, cfg.band_window(), processor
    )
    failed = processor.stats.failed
    init = cfg.dc_model_coefficients()
    fitter = fit_dc_model_two_stage if cfg.calibration.two_stage else fit_dc_model
    fit = fitter(records, init)
    within = None
    if cfg.calibration.within_leaf:
        within = fit_within_leaf_relations(
            leaves, oc, cfg.band_window(), processor=_processor(cfg, "within-leaf")
        )

    report = ReportGenerator(cfg.output_dir)
    report.write_calibration(records, fit, within)
    console.print(report.calibration_summary(records, fit))
    if failed:
        console.print(f"[yellow]{failed} of {leaves.n_retained} leaves failed[/yellow]")
        return EXIT_PARTIAL
    return EXIT_OK


def run_sweep_command(args, cfg: RunConfig) -> int:
    """LAI/LIDF/VZA sensitivity sweeps."""
    oc = _constants(cfg, args)
    leaves = _leaf_population(cfg).subset(cfg.sweep.subset)
    settings = cfg.sweep
    sweep_cfg = SweepConfig(
        leaves=leaves,
        lai_values=list(settings.lai_values),
        lidf_kinds=[LidfKind.parse(k) for k in settings.lidf_kinds],
        vza_values=list(settings.vza_values),
        vza_raa_deg=settings.vza_raa_deg,
        base_structure=cfg.canopy.to_structure(),
        base_geometry=cfg.canopy.to_geometry(),
    )
    axes = None if settings.axis == "all" else [SweepAxis(settings.axis)]
    reports = run_sweep(
        sweep_cfg, cfg.dc_model_coefficients(), oc, axes, cfg.band_window(), _processor(cfg, "sweep")
    )

    table = Table(title="rRMSE against DASF0", box=box.ROUNDED)
    table.add_column("Axis", style="bold cyan")
    table.add_column("Value")
    table.add_column("DASF0", justify="right")
    table.add_column("Non-abs. BRF", justify="right")
    table.add_column("sDASF %", justify="right")
    table.add_column("iDASF %", justify="right")
    table.add_column("Failed", justify="right")
    for rep in reports:
        table.add_row(
            rep.point.axis.value, rep.point.value, f"{rep.dasf0.mean:.4f}", f"{rep.non_absorbing_brf:.4f}",
            f"{rep.rrmse_sdasf:.2f}", f"{rep.rrmse_idasf:.2f}", str(rep.n_failed),
        )
    console.print(table)

    generator = ReportGenerator(cfg.output_dir)
    generator.write_sweep(reports)
    console.print(generator.sweep_summary(summarize_sweep(reports)))
    return EXIT_PARTIAL if any(rep.n_failed for rep in reports) else EXIT_OK


def run_validate_measured(args, cfg: RunConfig) -> int:
    """Estimator accuracy on a measured multi-angular library."""
    spectra, leaf_file = cfg.measured.spectra_file, cfg.measured.leaf_file
    if not spectra or not leaf_file:
        raise ConfigurationError("validate-measured needs --spectra and --leaf-file")
    oc = _constants(cfg, args)
    canopies = ingest_measured_library(spectra, leaf_file)
    report = validate_measured(
        canopies, cfg.dc_model_coefficients(), oc, cfg.band_window(),
        processor=_processor(cfg, "measured"),
    )
    generator = ReportGenerator(cfg.output_dir)
    generator.write_measured(report)
    console.print(generator.measured_summary(report))
    if report.n_failed:
        console.print(f"[yellow]{report.n_failed} of {len(report.observations)} observations failed[/yellow]")
        return EXIT_PARTIAL
    return EXIT_OK


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def run_bias_table(args, cfg: RunConfig) -> int:
    """Closed-form bias of the standard estimator across dry-matter ratios."""
    params = SIForwardParams(rho_i0=args.rho_i0, p=args.p)
    rows = bias_curve(args.t_c, args.t_m, args.cm_km, args.p_leaf, params)
    table = Table(title=f"Bias factors (t_c = {args.t_c:g}, DASF = {params.dasf:.4f})", box=box.ROUNDED)
    for column in ("t_m", "A", "C", "D", "dc", "DASF'", "DASF'/DASF"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(
            f"{row['t_m']:g}", f"{row['A']:.4f}", f"{row['C']:.4f}", f"{row['D']:.4f}",
            f"{row['dc']:.4f}", f"{row['dasf_prime']:.4f}", f"{row['ratio']:.4f}",
        )
    console.print(table)
    CSVExporter(cfg.output_dir).export_table(rows, "bias_table.csv")
    return EXIT_OK


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="Path to a JSON (or YAML) configuration file")
    common.add_argument("--constants", help="Optical constants CSV (else config, else $DASF_CONSTANTS_PATH)")
    common.add_argument("--threads", type=int, help="Worker threads (default: all cores)")
    common.add_argument("-o", "--output-dir", dest="output_dir", help="Output directory (default: output)")
    common.add_argument("--seed", type=int, help="Random seed (default: 2024)")
    common.add_argument("--window", help="Regression window lo:hi in nm (default: 710:790)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    return common


def _add_leaf_arguments(parser: argparse.ArgumentParser) -> None:
    ref = REFERENCE_BIOCHEM
    parser.add_argument("--n-struct", dest="n_struct", type=float, default=ref.n_struct, help="Leaf structure parameter N")
    parser.add_argument("--cab", type=float, default=ref.cab, help="Chlorophyll a+b (ug/cm2)")
    parser.add_argument("--car", type=float, default=ref.car, help="Carotenoids (ug/cm2)")
    parser.add_argument("--anth", type=float, default=ref.anth, help="Anthocyanins (ug/cm2)")
    parser.add_argument("--brown", type=float, default=ref.brown, help="Brown pigments (unitless)")
    parser.add_argument("--ewt", type=float, default=ref.ewt, help="Equivalent water thickness (cm)")
    parser.add_argument("--lma", type=float, default=ref.lma, help="Leaf mass per area (g/cm2)")
    parser.add_argument(
        "--surface-fraction", dest="surface_fraction", type=float, default=0.0,
        help="Leaf surface reflection fraction s_L in [0, 0.05]",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dasf",
        description="Directional area scattering factor (DASF) retrieval from canopy reflectance.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_parser()
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    subparsers.add_parser("constants-check", parents=[common], help="Validate an optical constants file")

    leaf_parser = subparsers.add_parser("leaf", parents=[common], help="Write leaf R/T/albedo spectra")
    leaf_parser.add_argument("--reference", action="store_true", help="Write the reference leaf albedo")
    _add_leaf_arguments(leaf_parser)

    canopy_parser = subparsers.add_parser("canopy", parents=[common], help="Write the canopy BRF spectrum")
    canopy_parser.add_argument("--canopy", help="Canopy JSON (lai, lidf, hotspot, sza_deg, vza_deg, raa_deg, soil)")
    canopy_parser.add_argument(
        "--non-absorbing", dest="non_absorbing", action="store_true",
        help="Print the BRF of the canopy with non-absorbing leaves",
    )
    _add_leaf_arguments(canopy_parser)

    estimate_parser = subparsers.add_parser("estimate", parents=[common], help="Estimate DASF from BRF spectra")
    estimate_parser.add_argument("inputs", nargs="+", help="BRF spectrum CSV file(s)")
    estimate_parser.add_argument(
        "--method", choices=["sdasf", "idasf", "dasf0", "all"], default="idasf", help="Estimator (default: idasf)"
    )
    estimate_parser.add_argument("--true-albedo", dest="true_albedo", nargs="+", help="True leaf albedo CSV(s)")
    estimate_parser.add_argument(
        "--reference-albedo", dest="reference_albedo", help="Reference albedo CSV (else from the constants)"
    )
    estimate_parser.add_argument("--dc-coeffs", dest="dc_coeffs", help="DC model coefficients JSON")

    calibrate_parser = subparsers.add_parser("calibrate", parents=[common], help="Build the training cloud and refit DC")
    calibrate_parser.add_argument("--n", type=int, help="Leaves to sample (default: 2000)")
    calibrate_parser.add_argument("--stats", help="Constituent statistics JSON")
    calibrate_parser.add_argument("--corr", help="Correlation matrix JSON")
    calibrate_parser.add_argument("--canopy", help="Canopy JSON")
    calibrate_parser.add_argument("--dc-coeffs", dest="dc_coeffs", help="Initial DC model coefficients JSON")
    calibrate_parser.add_argument("--two-stage", dest="two_stage", action="store_true", help="Rotate-then-fit refit")
    calibrate_parser.add_argument(
        "--within-leaf", dest="within_leaf", action="store_true", help="Also fit the within-leaf relations"
    )

    sweep_parser = subparsers.add_parser("sweep", parents=[common], help="LAI/LIDF/VZA sensitivity sweeps")
    sweep_parser.add_argument("--axis", choices=["all", "lai", "lidf", "vza"], help="Sweep axis (default: all)")
    sweep_parser.add_argument("--subset", type=int, help="Use only the first N synthetic leaves")
    sweep_parser.add_argument("--n", type=int, help="Leaves to sample (default: 2000)")
    sweep_parser.add_argument("--stats", help="Constituent statistics JSON")
    sweep_parser.add_argument("--corr", help="Correlation matrix JSON")
    sweep_parser.add_argument("--canopy", help="Base canopy JSON")
    sweep_parser.add_argument("--dc-coeffs", dest="dc_coeffs", help="DC model coefficients JSON")

    measured_parser = subparsers.add_parser(
        "validate-measured", parents=[common], help="Validate estimators on a measured library"
    )
    measured_parser.add_argument("--spectra", help="Canopy spectra CSV (canopy_id,species,vza_deg,raa_deg,wavelength_nm,dsc)")
    measured_parser.add_argument(
        "--leaf-file", dest="leaf_file", help="Leaf CSV (canopy_id,sample_id,side,wavelength_nm,dhrf,dhtf)"
    )
    measured_parser.add_argument("--dc-coeffs", dest="dc_coeffs", help="DC model coefficients JSON")

    bias_parser = subparsers.add_parser("bias-table", parents=[common], help="Tabulate the closed-form bias factors")
    bias_parser.add_argument("--t-c", dest="t_c", type=float, default=1.0, help="Chlorophyll ratio to the reference leaf")
    bias_parser.add_argument(
        "--t-m", dest="t_m", type=_float_list, default=[0.5, 1.0, 1.5, 2.0, 3.0],
        help="Comma-separated dry-matter ratios",
    )
    bias_parser.add_argument("--cm-km", dest="cm_km", type=float, default=0.05, help="Reference dry-matter absorption")
    bias_parser.add_argument("--p-leaf", dest="p_leaf", type=float, default=0.9, help="Within-leaf recollision")
    bias_parser.add_argument("--rho-i0", dest="rho_i0", type=float, default=0.4, help="rho(Omega) * i0")
    bias_parser.add_argument("--p", type=float, default=0.6, help="Canopy recollision probability")
    return parser


COMMANDS = {
    "constants-check": run_constants_check,
    "leaf": run_leaf,
    "canopy": run_canopy,
    "estimate": run_estimate,
    "calibrate": run_calibrate,
    "sweep": run_sweep_command,
    "validate-measured": run_validate_measured,
    "bias-table": run_bias_table,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_OK

    setup_logging(args.verbose, args.quiet)
    try:
        cfg = build_config(args)
        Path(cfg.output_dir).mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](args, cfg)
    except ConfigurationError as exc:
        err_console.print(f"[red]Error:[/red] {exc}", markup=True, highlight=False)
        return EXIT_CONFIG
    except NumericalError as exc:
        err_console.print(f"[red]Numerical failure:[/red] {exc}", markup=True, highlight=False)
        return EXIT_NUMERICAL
    except DasfError as exc:
        err_console.print(f"[red]Error:[/red] {exc}", markup=True, highlight=False)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
