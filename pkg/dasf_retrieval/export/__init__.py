"""Export modules for result tables, coefficients and plot data."""

from .csv_exporter import CSVExporter
from .json_exporter import JSONExporter, dumps
from .report import ReportGenerator

__all__ = ["CSVExporter", "JSONExporter", "ReportGenerator", "dumps"]
