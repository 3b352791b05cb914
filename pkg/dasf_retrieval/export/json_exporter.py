"""JSON export functionality."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Sequence

from ..models.calibration import DcFitResult, TrainingRecord, WithinLeafReport
from ..models.validation import QUANTILES, MeasuredReport, MetricReport

logger = logging.getLogger(__name__)


def dumps(data: Any) -> str:
    """Canonical JSON text used for files and stdout."""
    return json.dumps(data, indent=2, sort_keys=True)


class JSONExporter:
    """Export coefficients, reports and plot data to JSON."""

    def __init__(self, output_dir: str = "./output"):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def export(self, data: Any, filename: str) -> str:
        filepath = self.output_dir / filename
        with open(filepath, "w") as f:
            f.write(dumps(data))
            f.write("\n")
        logger.info("Wrote %s", filepath)
        return str(filepath)

    def export_fit(self, result: DcFitResult, filename: str = "dc_coefficients.json") -> str:
        """Fitted coefficients with the fit report (no plot data)."""
        return self.export(
            {"coefficients": result.coefficients.to_dict(), "fit_report": result.report.to_dict()}, filename
        )

    def export_fit_plot_data(
        self, result: DcFitResult, records: Sequence[TrainingRecord], filename: str = "dc_fit_plot.json"
    ) -> str:
        """DC versus DC0 scatter and, for two-stage fits, the rotated view."""
        data: Dict[str, Any] = {
            "scatter": [{"dc0": a, "dc_model": b} for a, b in result.report.scatter],
        }
        if result.report.rotated_x:
            data["rotated_view"] = {
                "rotation_deg": result.report.rotation_deg,
                "points": [
                    {"x": x, "dc0": r.dc0} for x, r in zip(result.report.rotated_x, records)
                ],
            }
        return self.export(data, filename)

    def export_within_leaf(self, report: WithinLeafReport, filename: str = "within_leaf_report.json") -> str:
        return self.export(report.to_dict(), filename)

    def export_sweep_plot_data(self, reports: Sequence[MetricReport], filename: str = "sweep_plot.json") -> str:
        """Violin quantiles and DC scatter per configuration."""
        configurations = []
        for rep in reports:
            configurations.append({
                "axis": rep.point.axis.value,
                "value": rep.point.value,
                "dasf0": rep.dasf0.to_dict(),
                "sdasf": rep.sdasf.to_dict(),
                "idasf": rep.idasf.to_dict(),
                "non_absorbing_brf": rep.non_absorbing_brf,
                "rrmse_reduction_pct": rep.rrmse_reduction,
                "dc_r2": rep.dc_r2,
                "dc_scatter": [{"dc0": a, "dc_model": b} for a, b in rep.dc_scatter],
            })
        return self.export({"quantiles": list(QUANTILES), "configurations": configurations}, filename)

    def export_measured_plot_data(self, report: MeasuredReport, filename: str = "measured_plot.json") -> str:
        """AE histograms and angle maps per species."""
        species = {}
        for sp, summary in report.summaries.items():
            species[sp.value] = {
                "mae_sdasf": summary.mae_sdasf,
                "mae_idasf": summary.mae_idasf,
                "mae_reduction_pct": summary.mae_reduction_pct,
                "n_observations": summary.n_observations,
                "n_failed": summary.n_failed,
                "histogram": {
                    "edges": summary.histogram_edges,
                    "sdasf": summary.histogram_sdasf,
                    "idasf": summary.histogram_idasf,
                },
                "delta_ae_map": report.delta_ae_maps[sp].to_rows(),
                "dasf0_map": report.dasf0_maps[sp].to_rows(),
            }
        return self.export({"species": species}, filename)
