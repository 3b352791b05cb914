"""Nonlinear least-squares refit of the DC bias model."""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit, least_squares, minimize_scalar

from ..errors import ConfigurationError, DegenerateFitError, NumericalError
from ..models.calibration import DcFitReport, DcFitResult, TrainingRecord
from ..models.estimates import DEFAULT_DC_COEFFICIENTS, DcModelCoefficients

logger = logging.getLogger(__name__)

MIN_RECORDS = 50
MAX_ITERATIONS = 500
TOLERANCE = 1e-15
MIN_SPREAD = 1e-12


def _arrays(records: Sequence[TrainingRecord]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if len(records) < MIN_RECORDS:
        raise ConfigurationError(f"DC fit needs at least {MIN_RECORDS} records, got {len(records)}")
    x1 = np.array([r.brf710 for r in records], dtype=np.float64)
    x2 = np.array([r.brf2260 for r in records], dtype=np.float64)
    y = np.array([r.dc0 for r in records], dtype=np.float64)
    if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(x2)) and np.all(np.isfinite(y))):
        raise NumericalError("training records contain non-finite values")
    if x1.std() <= MIN_SPREAD or x2.std() <= MIN_SPREAD:
        raise DegenerateFitError("training BRFs have no spread at 710 or 2260 nm")
    return x1, x2, y


def _canonical_order(x1, x2, y):
    # fixed reduction order regardless of how records were supplied
    order = np.lexsort((y, x2, x1))
    return x1[order], x2[order], y[order]


def evaluate(c: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return np.exp(c[0] * x1 + c[1] * x2 + c[2]) + c[3]


def _rmse(residuals: np.ndarray) -> float:
    return float(np.sqrt(np.mean(residuals ** 2)))


def _r2(y: np.ndarray, model: np.ndarray) -> float:
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0
    return 1.0 - float(np.sum((y - model) ** 2)) / ss_tot


def fit_dc_model(
    records: Sequence[TrainingRecord], init: DcModelCoefficients = DEFAULT_DC_COEFFICIENTS
) -> DcFitResult:
    """
    Refit DC = exp(c1 * BRF710 + c2 * BRF2260 + c3) + c4 to the records' DC0.

    Levenberg-Marquardt from init. A fit that hits the iteration cap is
    returned with converged = False rather than raised.
    """
    x1_in, x2_in, y_in = _arrays(records)
    x1, x2, y = _canonical_order(x1_in, x2_in, y_in)
    c0 = init.as_array()

    def residuals(c):
        return evaluate(c, x1, x2) - y

    def jacobian(c):
        e = np.exp(c[0] * x1 + c[1] * x2 + c[2])
        return np.column_stack([e * x1, e * x2, e, np.ones_like(e)])

    initial_rmse = _rmse(residuals(c0))
    with np.errstate(over="ignore", invalid="ignore"):
        result = least_squares(
            residuals, c0, jac=jacobian, method="lm",
            xtol=TOLERANCE, ftol=TOLERANCE, gtol=TOLERANCE, max_nfev=MAX_ITERATIONS,
        )
    if not np.all(np.isfinite(result.x)):
        raise NumericalError("DC model fit diverged")

    coeffs = DcModelCoefficients.from_sequence(result.x)
    model = evaluate(result.x, x1_in, x2_in)
    converged = result.status > 0
    report = DcFitReport(
        method="levenberg-marquardt",
        rmse=_rmse(model - y_in),
        r2=_r2(y_in, model),
        initial_rmse=initial_rmse,
        iterations=int(result.nfev),
        converged=converged,
        n_records=len(records),
        status=int(result.status),
        message=str(result.message),
        scatter=list(zip(y_in.tolist(), model.tolist())),
    )
    if not converged:
        logger.warning("DC model fit stopped after %d evaluations: %s", result.nfev, result.message)
    if not coeffs.is_physical:
        logger.warning("Fitted DC model %s has non-physical signs", coeffs.as_tuple())
    logger.info("DC model refit: RMSE %.3g -> %.3g, R2 %.4f", initial_rmse, report.rmse, report.r2)
    return DcFitResult(coefficients=coeffs, report=report)


def _exp_line(x, s, c3, c4):
    return np.exp(s * x + c3) + c4


def fit_dc_model_two_stage(
    records: Sequence[TrainingRecord], init: DcModelCoefficients = DEFAULT_DC_COEFFICIENTS
) -> DcFitResult:
    """
    Rotate-then-fit variant: project the BRF pair onto a direction theta,
    fit a one-dimensional exponential there, and pick theta by RMSE.
    """
    x1_in, x2_in, y_in = _arrays(records)
    x1, x2, y = _canonical_order(x1_in, x2_in, y_in)
    s0 = math.copysign(math.hypot(init.c1, init.c2), init.c1 or 1.0)
    p_start = [s0, init.c3, init.c4]
    evaluations = 0

    def stage_two(theta: float) -> Tuple[Optional[np.ndarray], float]:
        nonlocal evaluations
        evaluations += 1
        x = math.cos(theta) * x1 + math.sin(theta) * x2
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                popt, _ = curve_fit(_exp_line, x, y, p0=p_start, maxfev=MAX_ITERATIONS * 4)
        except (RuntimeError, ValueError):
            return None, math.inf
        rmse = _rmse(_exp_line(x, *popt) - y)
        return popt, rmse if math.isfinite(rmse) else math.inf

    initial_rmse = _rmse(evaluate(init.as_array(), x1, x2) - y)
    search = minimize_scalar(
        lambda t: min(stage_two(t)[1], 1e6),
        bounds=(-math.pi / 2.0 + 1e-6, math.pi / 2.0 - 1e-6),
        method="bounded",
        options={"xatol": 1e-10, "maxiter": MAX_ITERATIONS},
    )
    theta = float(search.x)
    popt, rmse = stage_two(theta)
    if popt is None:
        raise NumericalError(f"two-stage DC fit failed at theta = {math.degrees(theta):.3f} deg")

    s, c3, c4 = (float(v) for v in popt)
    coeffs = DcModelCoefficients(s * math.cos(theta), s * math.sin(theta), c3, c4)
    model = evaluate(coeffs.as_array(), x1_in, x2_in)
    rotated = (math.cos(theta) * x1_in + math.sin(theta) * x2_in).tolist()
    report = DcFitReport(
        method="two-stage",
        rmse=_rmse(model - y_in),
        r2=_r2(y_in, model),
        initial_rmse=initial_rmse,
        iterations=evaluations,
        converged=bool(search.success),
        n_records=len(records),
        status=int(search.status),
        message=str(search.message),
        scatter=list(zip(y_in.tolist(), model.tolist())),
        rotated_x=rotated,
        rotation_deg=math.degrees(theta),
    )
    if not report.converged:
        logger.warning("Two-stage DC fit did not converge: %s", search.message)
    logger.info("Two-stage DC refit: theta %.3f deg, RMSE %.3g", report.rotation_deg, report.rmse)
    return DcFitResult(coefficients=coeffs, report=report)
