"""Exception hierarchy shared by the library and the CLI."""

from typing import Any, Dict, Optional


class DasfError(Exception):
    """Base class for all errors raised by dasf_retrieval."""


class ConfigurationError(DasfError, ValueError):
    """Bad input, configuration, path or violated precondition (exit code 2)."""


class GridError(ConfigurationError):
    """Wavelength or band window not on (or outside) a spectral grid."""


class DataFormatError(ConfigurationError):
    """Input file does not follow the expected schema or value ranges."""


class NumericalError(DasfError, ArithmeticError):
    """Numerical failure inside a model or estimator (exit code 3)."""


class DegenerateFitError(NumericalError):
    """Regression input with too few points or (near) zero variance in x."""


class EstimatorError(NumericalError):
    """
    DASF estimator failure with the regression state attached.

    The diagnostics dict carries k, b, r2, dc and, when it could still be
    computed, the sDASF value, so callers can report what went wrong.
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})
