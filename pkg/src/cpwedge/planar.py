"""Spectral evaluation of the scattering expansion for a planar interface.

For a flat surface K is translation invariant, so every order reduces to a
2D wave-vector integral of ``H(k) K(k)^L M(k)`` with the Weyl expansion of
the free Green tensor.  This route shares no code with the real-space chart
integration and serves as its oracle; it is also cheap enough to reach the
high orders needed by the even/odd acceleration at large contrast.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

from .green import Medium, VACUUM

__all__ = ["planar_orders", "planar_exact"]

# tangent frame of the plane x = 0: t_perp = y, t_z = z, n = x
_T = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
# rows giving the frame components of n x v
_W = np.array([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])


def _cross(v):
    out = np.zeros(v.shape[:-1] + (3, 3), dtype=v.dtype)
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def _spectral_blocks(kappa, k, psi, interior: Medium, exterior: Medium, d: float):
    e1, m1, e0, m0 = interior.epsilon, interior.mu, exterior.epsilon, exterior.mu
    n1, n0 = interior.index, exterior.index
    kt = np.stack([k * np.cos(psi), k * np.sin(psi)], axis=-1)
    s0 = np.sqrt(n0**2 * kappa**2 + k**2)
    s1 = np.sqrt(n1**2 * kappa**2 + k**2)
    w = np.exp(-s0 * d) / (2 * s0)
    eye3 = np.eye(3)

    def gradient(sign):
        # Fourier image of the gradient for a source-observation offset along x
        return np.concatenate([(sign * s0)[..., None] + 0j, 1j * kt], axis=-1)

    def dyadic(v):
        return (eye3 - v[..., :, None] * v[..., None, :] / (n0 * kappa)[..., None, None] ** 2)

    kk = kappa[..., None, None]
    ww = w[..., None, None]
    # observation row: currents on the plane -> E at the particle
    v_obs = gradient(-1.0)
    H = np.concatenate([(-kk * m0 * dyadic(v_obs) * ww) @ _T, (-_cross(v_obs) * ww) @ _T], axis=-1)

    # in-plane kernel; EH/HE blocks vanish on a flat surface
    kkT = kt[..., :, None] * kt[..., None, :]
    eye2 = np.eye(2)

    def n2G(n, s):
        return (n * n * eye2 + kkT / kk**2) / (2 * s[..., None, None])

    D = -kk * (n2G(n1, s1) - n2G(n0, s0))
    WD = (_W @ _T) @ D
    K = np.zeros(kappa.shape + (4, 4), dtype=complex)
    K[..., 0:2, 2:4] = -2.0 / (m1 + m0) * WD
    K[..., 2:4, 0:2] = 2.0 / (e1 + e0) * WD

    v_src = gradient(1.0)
    F_EE = -kk * m0 * dyadic(v_src) * ww
    F_HE = _cross(v_src) * ww
    M = np.concatenate(
        [2.0 * m0 / (m1 + m0) * (_W @ F_HE), -2.0 * e0 / (e1 + e0) * (_W @ F_EE)], axis=-2
    )
    return H, K, M


def _grid(n_radial: int, n_angle: int, d: float):
    x, wx = leggauss(n_radial)
    s = (x + 1) / 2
    ws = wx / 2
    val = s / (1 - s) / d
    jac = ws / (1 - s) ** 2 / d
    psi = np.linspace(0, 2 * np.pi, n_angle, endpoint=False)
    KA, KK, PS = np.meshgrid(val, val, psi, indexing="ij")
    W = np.einsum("i,j->ij", jac, jac)[..., None] * (2 * np.pi / n_angle) * np.ones(n_angle)
    return KA.ravel(), KK.ravel(), PS.ravel(), W.ravel()


def planar_orders(
    interior: Medium,
    max_order: int,
    d: float = 1.0,
    exterior: Medium = VACUUM,
    n_radial: int = 60,
    n_angle: int = 16,
) -> np.ndarray:
    """Contributions ``dU_0 .. dU_max_order`` for a half-space at distance ``d``."""
    kappa, k, psi, w = _grid(n_radial, n_angle, d)
    H, K, M = _spectral_blocks(kappa, k, psi, interior, exterior, d)
    # -2 kappa from the frequency integral, k/(2 pi)^2 from the wave-vector measure
    weight = -2.0 * kappa * w * k / (2 * np.pi) ** 2
    out = np.empty(max_order + 1)
    V = M
    for L in range(max_order + 1):
        out[L] = np.sum(weight * np.einsum("nij,nji->n", H, V).real)
        V = K @ V
    return out


def planar_exact(interior: Medium, d: float = 1.0, exterior: Medium = VACUUM,
                 n_radial: int = 60, n_angle: int = 16) -> float:
    """Fully summed series, sum_L H K^L M = H (I - K)^-1 M."""
    kappa, k, psi, w = _grid(n_radial, n_angle, d)
    H, K, M = _spectral_blocks(kappa, k, psi, interior, exterior, d)
    weight = -2.0 * kappa * w * k / (2 * np.pi) ** 2
    V = np.linalg.solve(np.eye(4) - K, M)
    return float(np.sum(weight * np.einsum("nij,nji->n", H, V).real))
