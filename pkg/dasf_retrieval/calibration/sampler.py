"""Correlated, truncated-normal sampling of green-leaf biochemistry."""

import logging

import numpy as np

from ..errors import ConfigurationError
from ..leaf.invariants import GREEN_LEAF_MIN_CAB
from ..models.calibration import CORRELATION_ORDER, ConstituentStats, CorrelationMatrix, SyntheticLeafSet
from ..models.leaf import LeafBiochem

logger = logging.getLogger(__name__)

MAX_REDRAW_ROUNDS = 1000
# Acceptance below this fraction of first-round draws means the bounds are infeasible
MIN_ACCEPTANCE = 0.01
N_STRUCT = 1.5


def symmetric_sqrt(corr: CorrelationMatrix) -> np.ndarray:
    """Symmetric square root S with S @ S = corr."""
    eigval, eigvec = np.linalg.eigh(corr.values)
    return (eigvec * np.sqrt(np.clip(eigval, 0.0, None))) @ eigvec.T


def moment_matched_normals(rng: np.random.Generator, count: int) -> np.ndarray:
    """Standard normal draws rotated to zero sample mean and identity sample covariance."""
    z = rng.standard_normal((count, 4))
    if count <= 4:
        return z
    z -= z.mean(axis=0)
    eigval, eigvec = np.linalg.eigh(np.cov(z, rowvar=False))
    return z @ ((eigvec / np.sqrt(eigval)) @ eigvec.T)


def sample_leaves(stats: ConstituentStats, corr: CorrelationMatrix, n: int, seed: int) -> SyntheticLeafSet:
    """
    Draw n leaves from the truncated multivariate normal population.

    The first round is moment matched, so before truncation the sample
    correlation equals the target. Out-of-bounds samples are redrawn (not
    clipped) from plain normal draws; leaves with cab < 10 ug/cm2 are then
    dropped. Anthocyanins and brown pigments are
    zero and N is 1.5 for every leaf.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    ranges = stats.ordered()
    mean = np.array([r.mean for r in ranges])
    std = np.array([r.std for r in ranges])
    lo = np.array([r.min for r in ranges])
    hi = np.array([r.max for r in ranges])
    root = symmetric_sqrt(corr)
    rng = np.random.default_rng(seed)

    def draw(count: int) -> np.ndarray:
        return mean + std * (rng.standard_normal((count, 4)) @ root)

    samples = mean + std * (moment_matched_normals(rng, n) @ root)
    pending = np.flatnonzero(np.any((samples < lo) | (samples > hi), axis=1))
    if n - pending.size < MIN_ACCEPTANCE * n:
        raise ConfigurationError(
            f"rejection rate {pending.size / n:.1%} exceeds 99%; constituent bounds are infeasible"
        )
    rounds = 0
    while pending.size:
        rounds += 1
        if rounds > MAX_REDRAW_ROUNDS:
            raise ConfigurationError(
                f"{pending.size} samples still out of bounds after {MAX_REDRAW_ROUNDS} redraws"
            )
        samples[pending] = draw(pending.size)
        bad = np.any((samples[pending] < lo) | (samples[pending] > hi), axis=1)
        pending = pending[bad]

    columns = dict(zip(CORRELATION_ORDER, samples.T))
    green = columns["cab"] >= GREEN_LEAF_MIN_CAB
    leaves = tuple(
        LeafBiochem(
            n_struct=N_STRUCT,
            cab=float(columns["cab"][i]),
            car=float(columns["car"][i]),
            ewt=float(columns["ewt"][i]),
            lma=float(columns["lma"][i]),
        )
        for i in np.flatnonzero(green)
    )
    logger.info(
        "Sampled %d leaves (seed %d), retained %d with cab >= %g", n, seed, len(leaves), GREEN_LEAF_MIN_CAB
    )
    return SyntheticLeafSet(leaves=leaves, seed=seed, n_requested=n, n_retained=len(leaves))


def sample_correlation(leaves: SyntheticLeafSet) -> CorrelationMatrix:
    """Pearson correlation of the retained leaves in (cab, car, lma, ewt) order."""
    data = np.array([[getattr(leaf, name) for name in CORRELATION_ORDER] for leaf in leaves.leaves])
    if data.shape[0] < 3:
        raise ConfigurationError("need at least 3 leaves for a sample correlation")
    m = np.corrcoef(data, rowvar=False)
    m = 0.5 * (m + m.T)
    np.fill_diagonal(m, 1.0)
    return CorrelationMatrix(m)
