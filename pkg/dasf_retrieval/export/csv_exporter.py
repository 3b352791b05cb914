"""CSV export functionality."""

import csv
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

from ..models.calibration import TrainingRecord, WithinLeafReport
from ..models.spectrum import Spectrum
from ..models.validation import MeasuredReport, MetricReport
from ..spectral.io import write_spectrum_csv

logger = logging.getLogger(__name__)

TRAINING_HEADER = ["cab", "car", "ewt", "lma", "brf710", "brf2260", "k", "b", "dasf0", "dc0"]
SWEEP_HEADER = [
    "axis", "value", "method", "rrmse_pct", "mean_dasf", "mean_dasf0", "non_absorbing_brf", "n_ok", "n_failed",
]
SWEEP_METHODS = ("sdasf", "idasf")
OBSERVATION_HEADER = [
    "canopy_id", "species", "vza_deg", "raa_deg", "dasf0", "sdasf", "idasf",
    "ae_sdasf", "ae_idasf", "error",
]
WITHIN_LEAF_HEADER = ["cab", "car", "ewt", "lma", "r", "p", "epsilon", "p0"]


def fmt(value: Any) -> str:
    """Report-table number format."""
    if value is None:
        return ""
    if isinstance(value, float):
        return "{:.10g}".format(value)
    return str(value)


class CSVExporter:
    """Export spectra and result tables to CSV."""

    def __init__(self, output_dir: str = "./output"):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def _write(self, filename: str, header: Sequence[str], rows: List[List[Any]]) -> str:
        filepath = self.output_dir / filename
        with open(filepath, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
        logger.info("Wrote %s (%d rows)", filepath, len(rows))
        return str(filepath)

    def export_spectrum(self, spectrum: Spectrum, filename: str) -> str:
        """Spectrum with round-trip float values."""
        path = write_spectrum_csv(spectrum, self.output_dir / filename)
        logger.info("Wrote %s", path)
        return path

    def export_training_set(self, records: Sequence[TrainingRecord], filename: str = "training_cloud.csv") -> str:
        rows = [
            [r.leaf.cab, r.leaf.car, r.leaf.ewt, r.leaf.lma, r.brf710, r.brf2260, r.k, r.b, r.dasf0, r.dc0]
            for r in records
        ]
        return self._write(filename, TRAINING_HEADER, rows)

    def export_sweep(self, reports: Sequence[MetricReport], filename: str = "sweep_report.csv") -> str:
        """One row per configuration and estimator; the rRMSE reduction goes to the JSON plot data."""
        rows = []
        for rep in reports:
            for method in SWEEP_METHODS:
                rows.append([
                    rep.point.axis.value, rep.point.value, method,
                    getattr(rep, f"rrmse_{method}"), getattr(rep, method).mean, rep.dasf0.mean,
                    rep.non_absorbing_brf, rep.n_ok, rep.n_failed,
                ])
        return self._write(filename, SWEEP_HEADER, rows)

    def export_observations(self, report: MeasuredReport, filename: str = "measured_observations.csv") -> str:
        rows = []
        for obs in report.observations:
            rows.append([
                obs.canopy_id, obs.species.value, obs.direction[0], obs.direction[1],
                obs.dasf0, obs.sdasf, obs.idasf,
                obs.ae_sdasf if obs.ok else None, obs.ae_idasf if obs.ok else None, obs.error,
            ])
        return self._write(filename, OBSERVATION_HEADER, rows)

    def export_within_leaf(self, report: WithinLeafReport, filename: str = "within_leaf.csv") -> str:
        rows = [
            [row.leaf.cab, row.leaf.car, row.leaf.ewt, row.leaf.lma, row.r, row.p, row.epsilon, row.p0]
            for row in report.rows
        ]
        return self._write(filename, WITHIN_LEAF_HEADER, rows)

    def export_table(self, rows: Sequence[Dict[str, Any]], filename: str) -> str:
        """Rows of dicts sharing the first row's keys."""
        header = list(rows[0].keys()) if rows else []
        return self._write(filename, header, [[row[k] for k in header] for row in rows])
