"""Closed-form baselines: sharp PEC wedge, dielectric half-space, proximity
and reduced-PEC estimates.  All amplitudes are ``Upsilon = -U d^4`` with
hbar c alpha = 1 and ``d`` the smooth-frame particle distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .geometry import WedgeConfig, d_perp, sharp_frame

__all__ = [
    "UPSILON_PEC_PLATE",
    "PlateAmplitude",
    "pec_wedge_upsilon",
    "plate_upsilon",
    "plate_integrand",
    "pfa_upsilon",
    "reduced_pec_upsilon",
    "WALL_CUTOFF",
]

# planar limit of the PEC wedge and eps -> inf limit of the Lifshitz plate
UPSILON_PEC_PLATE = 3.0 / (8.0 * math.pi)
WALL_CUTOFF = 1e-6


@dataclass(frozen=True)
class PlateAmplitude:
    epsilon1: float
    upsilon: float
    error: float


def pec_wedge_upsilon(theta: float, phi: float, wall_cutoff: float = WALL_CUTOFF) -> float:
    """Amplitude of the exact potential of a sharp PEC wedge.

    ``phi`` is measured from the symmetry axis at the sharp edge.  Within
    ``wall_cutoff`` of the face (``phi -> pi/2 + theta``) returns ``inf``.
    """
    if not (-math.pi / 2 < theta <= math.pi / 2):
        raise ValueError(f"theta={theta} outside (-pi/2, pi/2]")
    wall = math.pi / 2 + theta
    phi = abs(phi)
    if phi > wall:
        raise ValueError(f"phi={phi} outside the vacuum region")
    if wall - phi <= wall_cutoff:
        return math.inf
    p = math.pi / (math.pi + 2 * theta)
    s2 = math.sin(p * (theta - phi + math.pi / 2)) ** 2
    p2 = p * p
    bracket = 135 * p2 * p2 / (s2 * s2) - 90 * (p2 - 1) * p2 / s2 - p2 * p2 - 10 * p2 + 11
    return bracket / (360 * math.pi)


def plate_integrand(kappa, k, epsilon1: float, d: float = 1.0, epsilon0: float = 1.0):
    """Integrand of the Lifshitz half-space amplitude in (kappa, k), including
    the 1/(2 pi) measure, so that Upsilon = int dkappa dk of this at d = 1."""
    s0 = np.sqrt(epsilon0 * kappa**2 + k**2)
    s1 = np.sqrt(epsilon1 * kappa**2 + k**2)
    r_tm = (epsilon1 * s0 - epsilon0 * s1) / (epsilon1 * s0 + epsilon0 * s1)
    r_te = (s0 - s1) / (s0 + s1)
    bracket = (epsilon0 * kappa**2 + 2 * k**2) * r_tm - epsilon0 * kappa**2 * r_te
    return k / (epsilon0 * s0) * bracket * np.exp(-2 * s0 * d) / (2 * math.pi) * d**4


@lru_cache(maxsize=256)
def _plate(epsilon1: float, rel_tol: float) -> PlateAmplitude:
    # polar coordinates kappa = rho cos(psi), k = rho sin(psi); the radial
    # integral int rho^3 exp(-2 rho) = 3/8 factors out exactly
    def angular(psi):
        c, s = math.cos(psi), math.sin(psi)
        root = math.sqrt(epsilon1 * c * c + s * s)
        r_tm = (epsilon1 - root) / (epsilon1 + root)
        r_te = (1 - root) / (1 + root)
        return s * ((1 + s * s) * r_tm - c * c * r_te)

    if epsilon1 == 1.0:
        return PlateAmplitude(epsilon1, 0.0, 0.0)
    val, err = integrate.quad(angular, 0.0, math.pi / 2, epsabs=1e-15, epsrel=rel_tol, limit=200)
    pref = 3.0 / (16.0 * math.pi)
    return PlateAmplitude(epsilon1, pref * val, pref * err)


def plate_upsilon(epsilon1: float, spec=None) -> PlateAmplitude:
    """Amplitude of the exact potential of a dielectric half-space in vacuum
    (mu0 = mu1 = 1)."""
    if epsilon1 < 1:
        raise ValueError("plate amplitude implemented for epsilon1 >= 1")
    rel_tol = 1e-10 if spec is None else min(spec.tolerance, 1e-6)
    return _plate(float(epsilon1), rel_tol)


def pfa_upsilon(cfg: WedgeConfig, epsilon1: float) -> float:
    """Half-space amplitude at the shortest particle-surface distance."""
    return plate_upsilon(epsilon1).upsilon * (cfg.d / d_perp(cfg)) ** 4


def pec_upsilon_sharp_frame(cfg: WedgeConfig) -> float:
    """Sharp PEC wedge amplitude at the equivalent sharp-frame position,
    rescaled to the smooth-frame distance ``d``."""
    sf = sharp_frame(cfg)
    return pec_wedge_upsilon(cfg.theta, sf.phi_s) * (cfg.d / sf.d_s) ** 4


def reduced_pec_upsilon(cfg: WedgeConfig, epsilon1: float) -> float:
    """Sharp PEC wedge amplitude scaled by the dielectric-to-PEC plate ratio."""
    if math.isinf(epsilon1):
        factor = 1.0
    else:
        factor = plate_upsilon(epsilon1).upsilon / UPSILON_PEC_PLATE
    return factor * pec_upsilon_sharp_frame(cfg)
