"""
DASF Retrieval - Directional Area Scattering Factor estimation toolkit

Spectral-invariant estimation of canopy DASF from hyperspectral BRF
(standard and dry-matter-corrected estimators), together with the leaf
and canopy forward models, calibration fitters and validation harnesses
they rely on.
"""

__version__ = "1.0.0"
__author__ = "Canopy Optics Team"
