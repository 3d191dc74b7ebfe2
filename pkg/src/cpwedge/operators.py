"""Surface scattering kernel K and bulk-surface kernel M, reduced to the
tangential frames of the surface samples.

Basis ordering everywhere is ``(E t_perp, E t_z, H t_perp, H t_z)``.  The
``n(u) x`` action is applied to the output vector and then expressed in the
frame at ``u``: the component along ``t_j`` of ``n x v`` is ``w_j . v`` with
``w_perp = -t_z`` and ``w_z = t_perp`` (for ``n = t_perp x t_z``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import SurfaceSample
from .green import Medium, SingularEvaluationError, VACUUM

__all__ = [
    "CoefficientChoice",
    "kernel_K",
    "kernel_M",
    "observation_row",
    "KernelBlock",
    "P_MATRIX",
]

P_MATRIX = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class CoefficientChoice:
    """Diagonal (E, H) coefficient matrices of the surface formulation."""

    C_i: tuple[float, float]
    C_e: tuple[float, float]

    def __post_init__(self):
        if 0.0 in self.C_i or 0.0 in self.C_e:
            raise ValueError("coefficient matrices must be invertible")
        if any(ci + ce == 0.0 for ci, ce in zip(self.C_i, self.C_e)):
            raise ValueError("C_i + C_e must be invertible")

    @classmethod
    def muller(cls, interior: Medium, exterior: Medium = VACUUM) -> "CoefficientChoice":
        """The choice that weakens the coincidence singularity to 1/|u - u'|."""
        return cls((interior.epsilon, interior.mu), (exterior.epsilon, exterior.mu))


@dataclass
class KernelBlock:
    matrix: np.ndarray
    source: SurfaceSample
    target: SurfaceSample


def _out_rows(s: SurfaceSample) -> np.ndarray:
    """Rows mapping a 3-vector v to the frame components of n x v, (..., 2, 3)."""
    return np.stack([-s.tangent_z, s.tangent_perp], axis=-2)


def _in_cols(s: SurfaceSample) -> np.ndarray:
    return np.stack([s.tangent_perp, s.tangent_z], axis=-1)


def _propagator_parts(index, kappa, dist):
    x = index * kappa * dist
    g = np.exp(-x) / (4 * np.pi * dist)
    inv = 1.0 / x
    a = 1.0 + inv + inv * inv
    b = -(1.0 + 3.0 * inv + 3.0 * inv * inv)
    c = 1.0 + inv
    return g, a, b, c


def _separation(r, r_prime):
    sep = r - r_prime
    dist = np.sqrt(np.einsum("...i,...i->...", sep, sep))
    if np.any(dist == 0):
        raise SingularEvaluationError("kernel evaluated at coincident points")
    return sep / dist[..., None], dist


def kernel_K(u: SurfaceSample, u_prime: SurfaceSample, kappa, media, coeffs=None) -> np.ndarray:
    """Tangentially reduced surface operator K(u, u'), shape ``(..., 4, 4)``.

    ``media = (interior, exterior)``.  ``coeffs`` defaults to the Muller
    choice ``C_i = diag(eps1, mu1)``, ``C_e = diag(eps0, mu0)``.
    """
    m1, m0 = media
    if coeffs is None:
        coeffs = CoefficientChoice.muller(m1, m0)
    kappa = np.asarray(kappa, dtype=float)
    rhat, dist = _separation(u.position, u_prime.position)

    W = _out_rows(u)
    T = _in_cols(u_prime)
    WT = W @ T
    wR = np.einsum("...ji,...i->...j", W, rhat)
    Rt = np.einsum("...i,...ij->...j", rhat, T)
    RR = wR[..., :, None] * Rt[..., None, :]
    # w_j . (rhat x t_j')
    X = np.einsum("...ji,...ik->...jk", W, np.cross(rhat[..., :, None], T, axis=-2))

    n1, n0 = m1.index, m0.index
    g1, a1, b1, c1 = _propagator_parts(n1, kappa, dist)
    g0, a0, b0, c0 = _propagator_parts(n0, kappa, dist)
    (ciE, ciH), (ceE, ceH) = coeffs.C_i, coeffs.C_e
    k = kappa[..., None, None] if kappa.ndim else kappa

    def ex(v):
        return v[..., None, None]

    sym1 = ex(g1 * a1) * WT + ex(g1 * b1) * RR
    sym0 = ex(g0 * a0) * WT + ex(g0 * b0) * RR
    D_EE = -k * (ciE * m1.mu * sym1 - ceE * m0.mu * sym0)
    D_HH = -k * (ciH * m1.epsilon * sym1 - ceH * m0.epsilon * sym0)
    D_EH = k * ex(ciE * n1 * g1 * c1 - ceE * n0 * g0 * c0) * X
    D_HE = -k * ex(ciH * n1 * g1 * c1 - ceH * n0 * g0 * c0) * X

    bE = 2.0 / (ciE + ceE)
    bH = 2.0 / (ciH + ceH)
    out = np.empty(WT.shape[:-2] + (4, 4))
    # rows of P (C_i + C_e)^-1: E <- -H, H <- E
    out[..., 0:2, 0:2] = -bH * D_HE
    out[..., 0:2, 2:4] = -bH * D_HH
    out[..., 2:4, 0:2] = bE * D_EE
    out[..., 2:4, 2:4] = bE * D_EH
    return out


def kernel_M(u: SurfaceSample, r0, kappa, media, coeffs=None) -> np.ndarray:
    """Bulk-surface operator from an electric source at ``r0`` to the
    tangential (E, H) components at ``u``; shape ``(..., 4, 3)``."""
    m1, m0 = media
    if coeffs is None:
        coeffs = CoefficientChoice.muller(m1, m0)
    kappa = np.asarray(kappa, dtype=float)
    rhat, dist = _separation(u.position, np.asarray(r0, dtype=float))
    W = _out_rows(u)
    n0 = m0.index
    g0, a0, b0, c0 = _propagator_parts(n0, kappa, dist)
    k = kappa[..., None, None] if kappa.ndim else kappa

    def ex(v):
        return v[..., None, None]

    dyad = ex(a0) * np.eye(3) + ex(b0) * (rhat[..., :, None] * rhat[..., None, :])
    F_EE = -k * m0.mu * ex(g0) * dyad
    F_HE = -k * ex(n0 * g0 * c0) * _cross(rhat)
    (ciE, ciH), (ceE, ceH) = coeffs.C_i, coeffs.C_e
    out = np.empty(W.shape[:-2] + (4, 3))
    out[..., 0:2, :] = (2.0 * ceH / (ciH + ceH)) * (W @ F_HE)
    out[..., 2:4, :] = (-2.0 * ceE / (ciE + ceE)) * (W @ F_EE)
    return out


def observation_row(r0, u: SurfaceSample, kappa, exterior: Medium = VACUUM) -> np.ndarray:
    """Electric field at ``r0`` radiated by unit tangential currents at ``u``.

    Shape ``(..., 3, 4)``; columns ordered like the kernel basis.
    """
    kappa = np.asarray(kappa, dtype=float)
    rhat, dist = _separation(np.asarray(r0, dtype=float), u.position)
    T = _in_cols(u)
    n0 = exterior.index
    g0, a0, b0, c0 = _propagator_parts(n0, kappa, dist)
    k = kappa[..., None, None] if kappa.ndim else kappa
    ex = lambda v: v[..., None, None]  # noqa: E731
    dyad = ex(a0) * np.eye(3) + ex(b0) * (rhat[..., :, None] * rhat[..., None, :])
    F_EE = -k * exterior.mu * ex(g0) * dyad
    F_EH = k * ex(n0 * g0 * c0) * _cross(rhat)
    out = np.empty(T.shape[:-2] + (3, 4))
    out[..., :, 0:2] = F_EE @ T
    out[..., :, 2:4] = F_EH @ T
    return out


def _cross(v):
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out
