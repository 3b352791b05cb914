"""
Four-stream turbid-medium canopy reflectance (SAIL family).

Geometry-only quantities (extinction, scattering weights, hotspot
integral) are computed once per (structure, geometry) and cached; leaf
optics enter as whole spectra so one call covers every wavelength.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ..errors import GridError, NumericalError
from ..models.canopy import CanopyReflectance, CanopyStructure
from ..models.leaf import LeafBiochem, LeafOptics, OpticalConstants
from ..models.spectrum import DEFAULT_GRID, Spectrum, ViewGeometry, WavelengthGrid
from ..leaf.prospect import prospect
from .lidf import CLASS_CENTRES_DEG, lidf_density

logger = logging.getLogger(__name__)

# Floor of the diffuse attenuation constant m; reached only for lossless leaves
M_FLOOR = 1e-6
# Refractive index of the leaf surface used for the non-absorbing canopy
NON_ABSORBING_INDEX = 1.5
HOTSPOT_STEPS = 20


def volscatt(tts: float, tto: float, psi: float, ttl: float) -> Tuple[float, float, float, float]:
    """
    Interception and volume-scattering weights for one leaf inclination.

    Args:
        tts: Solar zenith (degrees)
        tto: View zenith (degrees)
        psi: Relative azimuth folded to [0, 180] (degrees)
        ttl: Leaf inclination (degrees)

    Returns:
        (chi_s, chi_o, frho, ftau)
    """
    cts, cto = math.cos(math.radians(tts)), math.cos(math.radians(tto))
    sts, sto = math.sin(math.radians(tts)), math.sin(math.radians(tto))
    cospsi = math.cos(math.radians(psi))
    psir = math.radians(psi)
    cttl, sttl = math.cos(math.radians(ttl)), math.sin(math.radians(ttl))
    cs, co = cttl * cts, cttl * cto
    ss, so = sttl * sts, sttl * sto

    cosbts = -cs / ss if abs(ss) > 1e-6 else 5.0
    cosbto = -co / so if abs(so) > 1e-6 else 5.0
    if abs(cosbts) < 1.0:
        bts, ds = math.acos(cosbts), ss
    else:
        bts, ds = math.pi, cs
    chi_s = 2.0 / math.pi * ((bts - math.pi * 0.5) * cs + math.sin(bts) * ss)
    if abs(cosbto) < 1.0:
        bto, do = math.acos(cosbto), so
    else:
        bto, do = math.pi, co
    chi_o = 2.0 / math.pi * ((bto - math.pi * 0.5) * co + math.sin(bto) * so)

    btran1 = abs(bts - bto)
    btran2 = math.pi - abs(bts + bto - math.pi)
    if psir <= btran1:
        bt1, bt2, bt3 = psir, btran1, btran2
    elif psir <= btran2:
        bt1, bt2, bt3 = btran1, psir, btran2
    else:
        bt1, bt2, bt3 = btran1, btran2, psir

    t1 = 2.0 * cs * co + ss * so * cospsi
    t2 = math.sin(bt2) * (2.0 * ds * do + ss * so * math.cos(bt1) * math.cos(bt3)) if bt2 > 0.0 else 0.0
    denom = 2.0 * math.pi ** 2
    frho = max(((math.pi - bt2) * t1 + t2) / denom, 0.0)
    ftau = max((-bt2 * t1 + t2) / denom, 0.0)
    return chi_s, chi_o, frho, ftau


def _jfunc1(k: float, l: NDArray[np.float64], t: float) -> NDArray[np.float64]:
    delta = (k - l) * t
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (np.exp(-l * t) - np.exp(-k * t)) / (k - l)
    series = 0.5 * t * (np.exp(-k * t) + np.exp(-l * t)) * (1.0 - delta ** 2 / 12.0)
    return np.where(np.abs(delta) > 1e-3, direct, series)


def _jfunc2(k, l, t):
    return (1.0 - np.exp(-(k + l) * t)) / (k + l)


@dataclass(frozen=True)
class CanopyGeometry:
    """Wavelength-independent factors of one (structure, geometry) pair."""
    ks: float
    ko: float
    sob: float
    sof: float
    bf: float
    tss: float
    too: float
    tsstoo: float
    sumint: float


def _hotspot(ks: float, ko: float, lai: float, hotspot: float, dso: float) -> Tuple[float, float]:
    """Joint sun-view gap probability and the single-scattering integral."""
    tss = math.exp(-ks * lai)
    alf = 1e36
    if hotspot > 0.0:
        alf = (dso / hotspot) * 2.0 / (ks + ko)
    if alf == 0.0:
        return tss, (1.0 - tss) / (ks * lai)

    fhot = lai * math.sqrt(ko * ks)
    x1, y1, f1 = 0.0, 0.0, 1.0
    fint = (1.0 - math.exp(-alf)) * 0.05
    sumint = 0.0
    for step in range(1, HOTSPOT_STEPS + 1):
        if step < HOTSPOT_STEPS:
            x2 = -math.log(1.0 - step * fint) / alf
        else:
            x2 = 1.0
        y2 = -(ko + ks) * lai * x2 + fhot * (1.0 - math.exp(-alf * x2)) / alf
        f2 = math.exp(y2)
        sumint += (f2 - f1) * (x2 - x1) / (y2 - y1)
        x1, y1, f1 = x2, y2, f2
    if math.isnan(sumint):
        sumint = 0.0
    return f1, sumint


@lru_cache(maxsize=512)
def canopy_geometry(cs: CanopyStructure, g: ViewGeometry) -> CanopyGeometry:
    """LIDF-weighted extinction and scattering coefficients plus the hotspot term."""
    tts, tto, psi = g.sza_deg, g.vza_deg, g.folded_raa_deg
    cts, cto = math.cos(math.radians(tts)), math.cos(math.radians(tto))
    tants, tanto = math.tan(math.radians(tts)), math.tan(math.radians(tto))
    dso = math.sqrt(max(tants ** 2 + tanto ** 2 - 2.0 * tants * tanto * math.cos(math.radians(psi)), 0.0))

    ks = ko = bf = sob = sof = 0.0
    for frac, ttl in zip(lidf_density(cs.lidf_a, cs.lidf_b), CLASS_CENTRES_DEG):
        chi_s, chi_o, frho, ftau = volscatt(tts, tto, psi, ttl)
        ks += frac * chi_s / cts
        ko += frac * chi_o / cto
        bf += frac * math.cos(math.radians(ttl)) ** 2
        sob += frac * frho * math.pi / (cts * cto)
        sof += frac * ftau * math.pi / (cts * cto)

    tsstoo, sumint = _hotspot(ks, ko, cs.lai, cs.hotspot, dso)
    return CanopyGeometry(
        ks=ks, ko=ko, sob=sob, sof=sof, bf=bf,
        tss=math.exp(-ks * cs.lai), too=math.exp(-ko * cs.lai),
        tsstoo=tsstoo, sumint=sumint,
    )


def four_stream(
    leaf: LeafOptics, cs: CanopyStructure, g: ViewGeometry, soil: Optional[Spectrum] = None
) -> CanopyReflectance:
    """
    Canopy reflectance components for a leaf, structure and geometry.

    Args:
        leaf: Leaf reflectance/transmittance spectra
        cs: Canopy structure
        g: Sun/view geometry
        soil: Lambertian soil reflectance; None means black soil

    Returns:
        CanopyReflectance with the total BRF in brf
    """
    grid = leaf.grid
    if soil is None:
        rsoil = np.zeros(len(grid))
    elif soil.grid != grid:
        raise GridError("soil spectrum grid differs from the leaf grid")
    else:
        rsoil = soil.values

    geo = canopy_geometry(cs, g)
    lai = cs.lai
    ks, ko, bf = geo.ks, geo.ko, geo.bf
    sdb, sdf = 0.5 * (ks + bf), 0.5 * (ks - bf)
    dob, dof = 0.5 * (ko + bf), 0.5 * (ko - bf)
    ddb, ddf = 0.5 * (1.0 + bf), 0.5 * (1.0 - bf)

    rho = leaf.reflectance.values
    tau = leaf.transmittance.values
    sigb = ddb * rho + ddf * tau
    sigf = ddf * rho + ddb * tau
    sigb = np.where(sigb == 0.0, 1e-36, sigb)
    sigf = np.where(sigf == 0.0, 1e-36, sigf)
    att = 1.0 - sigf
    m = np.sqrt(np.maximum(att ** 2 - sigb ** 2, M_FLOOR ** 2))
    sb = sdb * rho + sdf * tau
    sf = sdf * rho + sdb * tau
    vb = dob * rho + dof * tau
    vf = dof * rho + dob * tau
    w = geo.sob * rho + geo.sof * tau

    e1 = np.exp(-m * lai)
    e2 = e1 ** 2
    rinf = (att - m) / sigb
    rinf2 = rinf ** 2
    re = rinf * e1
    denom = 1.0 - rinf2 * e2
    j1ks, j2ks = _jfunc1(ks, m, lai), _jfunc2(ks, m, lai)
    j1ko, j2ko = _jfunc1(ko, m, lai), _jfunc2(ko, m, lai)
    pss = (sf + sb * rinf) * j1ks
    qss = (sf * rinf + sb) * j2ks
    pv = (vf + vb * rinf) * j1ko
    qv = (vf * rinf + vb) * j2ko
    tdd = (1.0 - rinf2) * e1 / denom
    rdd = rinf * (1.0 - e2) / denom
    tsd = (pss - re * qss) / denom
    tdo = (pv - re * qv) / denom
    rdo = (qv - re * pv) / denom

    tss, too = geo.tss, geo.too
    z = _jfunc2(ks, ko, lai)
    g1 = (z - j1ks * too) / (ko + m)
    g2 = (z - j1ko * tss) / (ks + m)
    tv1 = (vf * rinf + vb) * g1
    tv2 = (vf + vb * rinf) * g2
    t1 = tv1 * (sf + sb * rinf)
    t2 = tv2 * (sf * rinf + sb)
    t3 = (rdo * qss + tdo * pss) * rinf
    rsod = (t1 + t2 - t3) / (1.0 - rinf2)
    rsos = w * lai * geo.sumint

    dn = np.maximum(1.0 - rsoil * rdd, 1e-36)
    rsodt = ((tss + tsd) * tdo + (tsd + tss * rsoil * rdd) * too) * rsoil / dn
    brf = rsos + rsod + geo.tsstoo * rsoil + rsodt

    if not np.all(np.isfinite(brf)):
        raise NumericalError(f"four-stream model overflowed for lai={lai}")
    if np.any(brf < -1e-12):
        raise NumericalError("four-stream model produced a negative BRF")
    return CanopyReflectance(
        brf=Spectrum(grid, np.maximum(brf, 0.0)),
        single=Spectrum(grid, rsos),
        multiple=Spectrum(grid, rsod),
        rdd=Spectrum(grid, rdd),
        tdd=Spectrum(grid, tdd),
        tss=tss,
        too=too,
    )


def canopy_brf(
    leaf: LeafOptics, cs: CanopyStructure, g: ViewGeometry, soil: Optional[Spectrum] = None
) -> Spectrum:
    """Canopy bidirectional reflectance factor (black soil unless given)."""
    return four_stream(leaf, cs, g, soil).brf


@lru_cache(maxsize=8)
def _non_absorbing_leaf(grid: WavelengthGrid) -> LeafOptics:
    zeros = np.zeros(len(grid))
    constants = OpticalConstants(
        grid=grid, n=np.full(len(grid), NON_ABSORBING_INDEX),
        k_cab=zeros, k_car=zeros, k_anth=zeros, k_brown=zeros, k_ewt=zeros, k_lma=zeros,
    )
    return prospect(LeafBiochem(n_struct=1.5), constants)


def non_absorbing_brf(cs: CanopyStructure, g: ViewGeometry, grid: WavelengthGrid = DEFAULT_GRID) -> float:
    """BRF of the canopy with lossless leaves, which equals its DASF."""
    brf = canopy_brf(_non_absorbing_leaf(grid), cs, g).values
    if brf.max() - brf.min() > 1e-6:
        raise NumericalError("non-absorbing canopy BRF is not spectrally flat")
    return float(brf.mean())
