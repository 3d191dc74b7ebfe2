"""Free electromagnetic Green tensors of a homogeneous medium at imaginary
frequency.

:func:`green_blocks` returns the closed-form dyadic blocks in the reduced
normalization (no frequency prefactor).  The operators used by the
scattering expansion need the field-from-current propagator, obtained from
the reduced blocks by the frozen per-family factors in
:data:`FIELD_FACTORS`: ``-kappa`` for EE/HH and ``+kappa`` for EH/HE.
These follow from Maxwell's equations with ``omega = i c kappa`` and were
confirmed by summing the planar expansion to the exact Lifshitz result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ConfigurationError

__all__ = [
    "Medium",
    "GreenBlocks",
    "SingularEvaluationError",
    "VACUUM",
    "green_blocks",
    "field_propagator",
    "cross_matrix",
    "FIELD_FACTORS",
]

# multiply green_blocks output by kappa * factor to get the field-from-current propagator
FIELD_FACTORS = {"EE": -1.0, "EH": 1.0, "HE": 1.0, "HH": -1.0}


class SingularEvaluationError(ArithmeticError):
    """A Green tensor was requested at coincident points."""


@dataclass(frozen=True)
class Medium:
    epsilon: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if not (self.epsilon > 0 and self.mu > 0):
            raise ConfigurationError(
                f"medium needs epsilon > 0 and mu > 0, got ({self.epsilon}, {self.mu})"
            )

    @property
    def index(self) -> float:
        return float(np.sqrt(self.epsilon * self.mu))


VACUUM = Medium(1.0, 1.0)


@dataclass
class GreenBlocks:
    EE: np.ndarray
    EH: np.ndarray
    HE: np.ndarray
    HH: np.ndarray
    kappa: np.ndarray
    separation: np.ndarray


def cross_matrix(v: np.ndarray) -> np.ndarray:
    """Matrix ``[v]_x`` with ``[v]_x w = v x w``; batched over leading axes."""
    v = np.asarray(v)
    out = np.zeros(v.shape[:-1] + (3, 3), dtype=v.dtype)
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def _scalar_parts(index, kappa, sep):
    # explicit sum of squares: exactly even in sep, so reciprocity holds bitwise
    dist = np.sqrt(np.sum(sep * sep, axis=-1))
    if np.any(dist == 0):
        raise SingularEvaluationError("Green tensor evaluated at coincident points")
    x = index * kappa * dist
    g = np.exp(-x) / (4 * np.pi * dist)
    inv = 1.0 / x
    a = 1.0 + inv + inv * inv
    b = -(1.0 + 3.0 * inv + 3.0 * inv * inv)
    c = 1.0 + inv
    rhat = sep / dist[..., None]
    return g, a, b, c, rhat


def green_blocks(medium: Medium, kappa, r, r_prime) -> GreenBlocks:
    """Reduced dyadic blocks for propagation from ``r_prime`` to ``r``.

    With ``x = n kappa |R|`` and ``g = exp(-x) / (4 pi |R|)``::

        EE = mu  g [a(x) I + b(x) R^R^]
        HH = eps g [a(x) I + b(x) R^R^]
        EH = -HE = n g (1 + 1/x) [R^]_x

    ``r``, ``r_prime`` may be batched with shape ``(..., 3)``.
    """
    r = np.asarray(r, dtype=float)
    r_prime = np.asarray(r_prime, dtype=float)
    sep = r - r_prime
    kappa = np.asarray(kappa, dtype=float)
    n = medium.index
    g, a, b, c, rhat = _scalar_parts(n, kappa, sep)
    eye = np.eye(3)
    dyad = a[..., None, None] * eye + b[..., None, None] * (rhat[..., :, None] * rhat[..., None, :])
    base = g[..., None, None] * dyad
    eh = (n * g * c)[..., None, None] * cross_matrix(rhat)
    return GreenBlocks(
        EE=medium.mu * base,
        EH=eh,
        HE=-eh,
        HH=medium.epsilon * base,
        kappa=kappa,
        separation=sep,
    )


def field_propagator(medium: Medium, kappa, r, r_prime) -> np.ndarray:
    """6x6 map from surface currents (J, K) at ``r_prime`` to fields (E, H) at ``r``.

    Returned shape ``(..., 2, 2, 3, 3)`` indexed as ``[p, q, i, j]`` with
    ``p, q`` in (E, H).
    """
    blk = green_blocks(medium, kappa, r, r_prime)
    k = np.asarray(kappa, dtype=float)[..., None, None]
    out = np.empty(blk.EE.shape[:-2] + (2, 2, 3, 3))
    out[..., 0, 0, :, :] = FIELD_FACTORS["EE"] * k * blk.EE
    out[..., 0, 1, :, :] = FIELD_FACTORS["EH"] * k * blk.EH
    out[..., 1, 0, :, :] = FIELD_FACTORS["HE"] * k * blk.HE
    out[..., 1, 1, :, :] = FIELD_FACTORS["HH"] * k * blk.HH
    return out
