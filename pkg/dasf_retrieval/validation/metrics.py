"""Accuracy metrics for DASF estimates."""

from typing import Sequence

import numpy as np

from ..errors import ConfigurationError


def rrmse(est: Sequence[float], ref: Sequence[float]) -> float:
    """Relative RMSE in percent: 100 * RMSE(est, ref) / mean(ref)."""
    est = np.asarray(est, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    if est.shape != ref.shape or est.ndim != 1 or est.size == 0:
        raise ConfigurationError(f"rrmse needs equal nonzero lengths, got {est.shape} and {ref.shape}")
    mean_ref = float(ref.mean())
    if not mean_ref > 0.0:
        raise ConfigurationError(f"rrmse reference mean must be positive, got {mean_ref}")
    return 100.0 * float(np.sqrt(np.mean((est - ref) ** 2))) / mean_ref


def rrmse_reduction(rrmse_s: float, rrmse_i: float) -> float:
    """Percent reduction of the improved estimator's rRMSE."""
    if not rrmse_s > 0.0:
        return 0.0
    return 100.0 * (1.0 - rrmse_i / rrmse_s)


def mae(est: Sequence[float], ref: Sequence[float]) -> float:
    est = np.asarray(est, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    if est.shape != ref.shape or est.size == 0:
        raise ConfigurationError("mae needs equal nonzero lengths")
    return float(np.mean(np.abs(est - ref)))
