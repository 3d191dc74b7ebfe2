"""Order-by-order multiple scattering expansion of the Casimir-Polder
potential, in units where hbar c alpha = 1.

The order-L term is::

    dU_L = -2 int_0^inf dkappa kappa int dS_0 ... dS_L
           tr[ G0(r0, u_0) K(u_0, u_1) ... K(u_{L-1}, u_L) M(u_L, r0) ]

where only the electric (EE) block of the chain enters.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import SphereFixture, SurfaceSample, WedgeConfig
from .green import Medium, VACUUM
from .operators import CoefficientChoice, kernel_K, kernel_M, observation_row
from .quadrature import (
    ChartMap,
    IntegralEstimate,
    IntegrationSpec,
    integrate,
    sphere_chart_map,
    surface_chart_map,
)

__all__ = [
    "PotentialResult",
    "integrand_order0",
    "integrand_orderL",
    "chain_trace",
    "delta_U",
    "compute_potential",
    "upsilon",
]


def chain_trace(samples: list[SurfaceSample], r0, kappa, media, coeffs=None) -> np.ndarray:
    """Trace of G0 K ... K M for consecutive surface samples (batched)."""
    interior, exterior = media
    V = kernel_M(samples[-1], r0, kappa, media, coeffs)
    for i in range(len(samples) - 2, -1, -1):
        V = kernel_K(samples[i], samples[i + 1], kappa, media, coeffs) @ V
    H = observation_row(r0, samples[0], kappa, exterior)
    return np.einsum("...ij,...ji->...", H, V)


def integrand_order0(u: SurfaceSample, r0, kappa, media, coeffs=None) -> np.ndarray:
    """sum_p tr[G0^(Ep)(r0, u) M^(pE)(u, r0)] at one surface point."""
    return chain_trace([u], r0, kappa, media, coeffs)


def integrand_orderL(samples: list[SurfaceSample], r0, kappa, media, coeffs=None, L=None) -> np.ndarray:
    """Chain integrand with ``L`` surface kernels; needs ``L + 1`` samples."""
    if L is None:
        L = len(samples) - 1
    if L < 1 or len(samples) != L + 1:
        raise ValueError(f"order {L} needs {L + 1} surface samples, got {len(samples)}")
    return chain_trace(samples, r0, kappa, media, coeffs)


def _make_integrand(cmap: ChartMap, r0, media, coeffs):
    def f(x):
        kappa, samples, w = cmap(x)
        return -2.0 * kappa * w * chain_trace(samples, r0, kappa, media, coeffs)

    return f


def delta_U(L: int, body, media, spec: IntegrationSpec | None = None, coeffs=None, r0=None) -> IntegralEstimate:
    """Order-``L`` contribution to the potential.

    ``body`` is a :class:`WedgeConfig` (particle position taken from it) or a
    :class:`SphereFixture` with explicit ``r0``.  ``media`` is
    ``(interior, exterior)``.
    """
    if L < 0:
        raise ValueError("order must be non-negative")
    dim = 3 + 2 * L
    spec = spec or IntegrationSpec(dim)
    if spec.dimension != dim:
        raise ValueError(f"order {L} integrates over {dim} dimensions, spec has {spec.dimension}")
    interior, exterior = media
    if L >= 1 and interior == exterior and coeffs is None:
        # K vanishes identically for matched media
        return IntegralEstimate(0.0, 0.0, 0, True)
    if isinstance(body, WedgeConfig):
        cmap = surface_chart_map(body, L, spec)
        r0 = body.particle
    elif isinstance(body, SphereFixture):
        if r0 is None:
            raise ValueError("sphere fixture needs an explicit particle position")
        cmap = sphere_chart_map(body, r0, L)
    else:
        raise TypeError(f"unsupported body {type(body).__name__}")
    return integrate(_make_integrand(cmap, r0, media, coeffs), spec)


@dataclass
class PotentialResult:
    """Per-order MSE contributions at one particle position (hbar c alpha = 1)."""

    delta_U: list[float]
    errors: list[float]
    d: float
    converged: list[bool] = field(default_factory=list)
    evals: list[int] = field(default_factory=list)
    shanks_estimate: float = math.nan
    shanks_policy: str = ""
    metadata: dict = field(default_factory=dict)

    @property
    def partial_sums(self) -> list[float]:
        return [float(v) for v in np.cumsum(self.delta_U)]

    @property
    def upsilon(self) -> float:
        """Amplitude of the accelerated estimate, -U d^4."""
        return upsilon(self.shanks_estimate, self.d)

    @property
    def upsilon_partials(self) -> list[float]:
        return [upsilon(u, self.d) for u in self.partial_sums]

    @property
    def total_error(self) -> float:
        return float(math.sqrt(sum(e * e for e in self.errors)))

    @property
    def status(self) -> str:
        return "ok" if all(self.converged) else "tolerance_miss"


def upsilon(U: float, d: float) -> float:
    """Dimensionless amplitude -U d^4 (hbar c alpha = 1)."""
    return -U * d**4 + 0.0  # no negative zero


def compute_potential(
    cfg: WedgeConfig,
    interior: Medium,
    max_order: int = 2,
    rel_tol: float | None = None,
    seed: int = 0,
    exterior: Medium = VACUUM,
    coeffs: CoefficientChoice | None = None,
    policy_threshold: float = 50.0,
    **spec_kw,
) -> PotentialResult:
    """Evaluate orders ``0..max_order`` and their Shanks-accelerated sum."""
    from .accel import accelerate

    dU, err, conv, evals = [], [], [], []
    matched = interior == exterior and coeffs is None
    for L in range(max_order + 1):
        if matched:
            # no contrast: the scattering Green tensor vanishes at every order
            dU.append(0.0)
            err.append(0.0)
            conv.append(True)
            evals.append(0)
            continue
        spec = IntegrationSpec(3 + 2 * L, rel_tol=rel_tol, seed=seed + L, **spec_kw)
        est = delta_U(L, cfg, (interior, exterior), spec, coeffs)
        dU.append(est.value)
        err.append(est.abs_error)
        conv.append(est.converged)
        evals.append(est.evals)
    res = PotentialResult(
        delta_U=dU,
        errors=err,
        d=cfg.d,
        converged=conv,
        evals=evals,
        metadata={
            "geometry": asdict(cfg),
            "interior": asdict(interior),
            "exterior": asdict(exterior),
            "max_order": max_order,
            "rel_tol": rel_tol,
            "seed": seed,
            "policy_threshold": policy_threshold,
        },
    )
    if len(dU) >= 3:
        rep = accelerate(res.partial_sums, interior.epsilon, policy_threshold)
        res.shanks_estimate = rep.final_estimate
        res.shanks_policy = rep.policy
    else:
        res.shanks_estimate = res.partial_sums[-1]
        res.shanks_policy = "none"
    return res
