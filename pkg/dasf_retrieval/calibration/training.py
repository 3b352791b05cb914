"""Training cloud of (DC0, BRF710, BRF2260) from simulated canopies."""

import logging
from typing import List, Optional

from ..analysis.regression import DC_BANDS_NM, dasf0_from_true_albedo, dc0, regress_brf
from ..canopy.sail import canopy_brf
from ..leaf.prospect import prospect, reference_albedo
from ..models.calibration import SyntheticLeafSet, TrainingRecord
from ..models.canopy import CanopyStructure
from ..models.leaf import LeafBiochem, OpticalConstants
from ..models.spectrum import BandWindow, Spectrum, ViewGeometry
from ..processing.batch import BatchProcessor
from ..spectral.core import at

logger = logging.getLogger(__name__)


def training_record(
    leaf: LeafBiochem,
    canopy: CanopyStructure,
    g: ViewGeometry,
    oc: OpticalConstants,
    omega_r: Spectrum,
    w: BandWindow = BandWindow(),
) -> TrainingRecord:
    """Simulate one canopy and derive its oracle bias factor."""
    optics = prospect(leaf, oc)
    brf = canopy_brf(optics, canopy, g)
    d0 = dasf0_from_true_albedo(brf, optics.albedo, w)
    reg = regress_brf(brf, omega_r, w)
    return TrainingRecord(
        leaf=leaf,
        brf710=at(brf, DC_BANDS_NM[0]),
        brf2260=at(brf, DC_BANDS_NM[1]),
        dc0=dc0(reg, d0.value),
        dasf0=d0.value,
        k=reg.k,
        b=reg.b,
    )


def build_training_set(
    leaves: SyntheticLeafSet,
    canopy: CanopyStructure,
    g: ViewGeometry,
    oc: OpticalConstants,
    w: BandWindow = BandWindow(),
    processor: Optional[BatchProcessor] = None,
) -> List[TrainingRecord]:
    """
    One training record per leaf, in leaf order.

    Leaves whose simulation or regression fails are logged and left out;
    the processor's stats carry the failure count.
    """
    omega_r = reference_albedo(oc)
    processor = processor or BatchProcessor(label="training")
    results = processor.map_ordered(
        lambda leaf: training_record(leaf, canopy, g, oc, omega_r, w), leaves.leaves
    )
    records = [r.value for r in results if r.ok]
    logger.info("Training cloud: %d records from %d leaves", len(records), leaves.n_retained)
    return records
