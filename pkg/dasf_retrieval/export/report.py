"""Unified report generator combining the CSV and JSON exporters."""

from pathlib import Path
from typing import Dict, Optional, Sequence

from ..models.calibration import DcFitResult, TrainingRecord, WithinLeafReport
from ..models.validation import MeasuredReport, MetricReport
from .csv_exporter import CSVExporter
from .json_exporter import JSONExporter


class ReportGenerator:
    """Writes every artifact of a subcommand and builds its console summary."""

    def __init__(self, output_dir: str = "./output"):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

        self.json_exporter = JSONExporter(output_dir)
        self.csv_exporter = CSVExporter(output_dir)

    def write_calibration(
        self,
        records: Sequence[TrainingRecord],
        fit: DcFitResult,
        within_leaf: Optional[WithinLeafReport] = None,
    ) -> Dict[str, str]:
        """
        Training cloud, fitted coefficients and plot data.

        Returns:
            Dictionary mapping artifact name to output filepath
        """
        results = {
            "training_csv": self.csv_exporter.export_training_set(records),
            "coefficients_json": self.json_exporter.export_fit(fit),
            "plot_json": self.json_exporter.export_fit_plot_data(fit, records),
        }
        if within_leaf is not None:
            results["within_leaf_json"] = self.json_exporter.export_within_leaf(within_leaf)
            results["within_leaf_csv"] = self.csv_exporter.export_within_leaf(within_leaf)
        return results

    def write_sweep(self, reports: Sequence[MetricReport]) -> Dict[str, str]:
        return {
            "report_csv": self.csv_exporter.export_sweep(reports),
            "plot_json": self.json_exporter.export_sweep_plot_data(reports),
        }

    def write_measured(self, report: MeasuredReport) -> Dict[str, str]:
        return {
            "observations_csv": self.csv_exporter.export_observations(report),
            "plot_json": self.json_exporter.export_measured_plot_data(report),
        }

    def calibration_summary(self, records: Sequence[TrainingRecord], fit: DcFitResult) -> str:
        c = fit.coefficients
        status = "converged" if fit.report.converged else "NOT converged"
        return (
            f"{len(records)} records; DC = exp({c.c1:.4f} BRF710 {c.c2:+.4f} BRF2260 {c.c3:+.4f}) {c.c4:+.4f}; "
            f"RMSE {fit.report.rmse:.4g}, R2 {fit.report.r2:.4f} ({status})"
        )

    def sweep_summary(self, summary: Dict[str, Dict[str, float]]) -> str:
        parts = [
            f"{axis}: sDASF {row['rrmse_sdasf']:.2f}% / iDASF {row['rrmse_idasf']:.2f}% "
            f"(-{row['reduction_pct']:.0f}%)"
            for axis, row in summary.items()
        ]
        return "; ".join(parts) if parts else "no configurations evaluated"

    def measured_summary(self, report: MeasuredReport) -> str:
        parts = [
            f"{sp.value}: MAE sDASF {s.mae_sdasf:.4f} / iDASF {s.mae_idasf:.4f} "
            f"({s.mae_reduction_pct:.0f}% lower, n={s.n_observations})"
            for sp, s in report.summaries.items()
        ]
        return "; ".join(parts) if parts else "no observations"
