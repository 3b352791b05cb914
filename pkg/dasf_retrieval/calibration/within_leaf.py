"""Within-leaf recollision relations fitted across a synthetic leaf population."""

import logging
from dataclasses import replace
from typing import List, Optional

import numpy as np

from ..errors import ConfigurationError
from ..leaf.invariants import leaf_invariant_fit
from ..leaf.prospect import prospect, reference_albedo
from ..models.calibration import LeafInvariantRow, SyntheticLeafSet, WithinLeafReport
from ..models.leaf import REFERENCE_BIOCHEM, LeafBiochem, OpticalConstants
from ..models.spectrum import BandWindow, Spectrum
from ..processing.batch import BatchProcessor
from ..spectral.core import linear_fit

logger = logging.getLogger(__name__)

MIN_LEAVES_PER_BIN = 10
DEFAULT_BINS = 5


def _leaf_row(leaf: LeafBiochem, oc: OpticalConstants, omega_r: Spectrum, w: BandWindow) -> LeafInvariantRow:
    fit = leaf_invariant_fit(prospect(leaf, oc).albedo, omega_r, w)
    # p0: the same leaf at the reference dry matter content
    at_reference = replace(leaf, lma=REFERENCE_BIOCHEM.lma)
    p0 = leaf_invariant_fit(prospect(at_reference, oc).albedo, omega_r, w).p
    return LeafInvariantRow(leaf=leaf, r=fit.r, p=fit.p, epsilon=fit.epsilon, p0=p0)


def fit_within_leaf_relations(
    leaves: SyntheticLeafSet,
    oc: OpticalConstants,
    w: BandWindow = BandWindow(),
    n_bins: int = DEFAULT_BINS,
    processor: Optional[BatchProcessor] = None,
) -> WithinLeafReport:
    """
    Fit p = k(lma) * p0(cab) + b(lma) and the cab dependence of p0, p and r.

    Leaves are split into n_bins equal-count LMA bins; each bin yields one
    (k, b) pair, and k and b are then regressed on the bin's mean LMA.
    """
    omega_r = reference_albedo(oc)
    processor = processor or BatchProcessor(label="within-leaf")
    results = processor.map_ordered(lambda leaf: _leaf_row(leaf, oc, omega_r, w), leaves.leaves)
    rows: List[LeafInvariantRow] = [r.value for r in results if r.ok]
    if len(rows) < n_bins * MIN_LEAVES_PER_BIN:
        raise ConfigurationError(
            f"{len(rows)} leaves cannot fill {n_bins} LMA bins of at least {MIN_LEAVES_PER_BIN}"
        )

    lma = np.array([row.leaf.lma for row in rows])
    cab = np.array([row.leaf.cab for row in rows])
    p = np.array([row.p for row in rows])
    p0 = np.array([row.p0 for row in rows])
    r = np.array([row.r for row in rows])
    eps = np.array([row.epsilon for row in rows])

    bins = []
    for members in np.array_split(np.argsort(lma, kind="stable"), n_bins):
        line = linear_fit(p0[members], p[members])
        bins.append({
            "lma_mean": float(lma[members].mean()),
            "lma_min": float(lma[members].min()),
            "lma_max": float(lma[members].max()),
            "k": line.slope,
            "b": line.intercept,
            "r2": line.r2,
            "n": int(members.size),
        })
    bin_lma = np.array([b["lma_mean"] for b in bins])
    bin_k = np.array([b["k"] for b in bins])
    bin_b = np.array([b["b"] for b in bins])
    k_line = linear_fit(bin_lma, bin_k)
    b_line = linear_fit(bin_lma, bin_b)

    inv_cab = 1.0 / cab
    p0_line = linear_fit(inv_cab, p0)
    p_line = linear_fit(inv_cab, p)
    r_p0_line = linear_fit(p0, r)
    r_cab_line = linear_fit(inv_cab, r)
    k_mean, b_mean = float(bin_k.mean()), float(bin_b.mean())
    approx = k_mean * p0 + b_mean

    report = WithinLeafReport(
        k_slope=k_line.slope,
        k_intercept=k_line.intercept,
        b_slope=b_line.slope,
        b_intercept=b_line.intercept,
        p0_intercept=p0_line.intercept,
        p0_coefficient=-p0_line.slope,
        p_intercept=p_line.intercept,
        p_coefficient=-p_line.slope,
        r_slope_p0=r_p0_line.slope,
        r_intercept_p0=r_p0_line.intercept,
        k_mean=k_mean,
        k_std=float(bin_k.std()),
        b_mean=b_mean,
        b_std=float(bin_b.std()),
        epsilon_min=float(eps.min()),
        epsilon_max=float(eps.max()),
        r_cab_coefficient=r_cab_line.slope,
        r_cab_intercept=-r_cab_line.intercept,
        p_mean_value_rmse=float(np.sqrt(np.mean((p - approx) ** 2))),
        bins=bins,
        rows=rows,
    )
    logger.info(
        "Within-leaf fit over %d leaves: k = %.3f*LMA + %.3f, p0 = %.3f - %.3f/cab",
        len(rows), report.k_slope, report.k_intercept, report.p0_intercept, report.p0_coefficient,
    )
    return report
