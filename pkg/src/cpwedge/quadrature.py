"""Randomized quasi-Monte Carlo integration over the unit cube and the chart
maps that turn MSE surface integrals into cube integrals.

The engine runs ``replicates`` independently scrambled Sobol sequences and
doubles their length until the replicate spread meets the tolerance.  Each
replicate owns a seed spawned from the user seed, and replicate means are
combined in index order, so the estimate is bit-identical for a fixed seed
and budget regardless of how many worker threads evaluate it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .geometry import SphereFixture, SurfaceSample, WedgeConfig, d_perp, foot_point, sphere_point, surface_point

__all__ = [
    "IntegrationSpec",
    "IntegralEstimate",
    "integrate",
    "ChartMap",
    "surface_chart_map",
    "sphere_chart_map",
    "default_rel_tol",
]

# keep cube points off the faces; integrands may be singular there
_EDGE = 1e-15
_CHUNK = 1 << 15


def default_rel_tol(dimension: int) -> float:
    return 0.005 if dimension <= 5 else 0.01


@dataclass(frozen=True)
class IntegrationSpec:
    """Budget, tolerance and truncation for one cube integral.

    ``truncation`` is ``(T_max, Z_max)`` in units of the particle distance.
    ``smoothing="cubic"`` flattens the cube faces for integrands with
    endpoint singularities; the surface maps leave it off because their
    polar radii must stay resolvable against the base point.
    """

    dimension: int
    rel_tol: float | None = None
    max_evals: int = 1 << 22
    seed: int = 0
    truncation: tuple[float, float] = (12.0, 12.0)
    compactification: str = "rational"
    replicates: int = 16
    min_points: int = 1 << 11
    threads: int = 1
    abs_tol: float = 0.0
    smoothing: str = "none"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.rel_tol is not None and not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if min(self.truncation) <= 0:
            raise ValueError("truncation lengths must be positive")
        if self.replicates < 2:
            raise ValueError("at least two replicates are needed for an error estimate")
        if self.smoothing not in _SMOOTHING:
            raise ValueError(f"unknown smoothing {self.smoothing!r}")
        if self.compactification not in ("rational",):
            raise ValueError(f"unknown compactification {self.compactification!r}")

    @property
    def tolerance(self) -> float:
        return self.rel_tol if self.rel_tol is not None else default_rel_tol(self.dimension)

    def replace(self, **kw) -> "IntegrationSpec":
        from dataclasses import replace

        return replace(self, **kw)


@dataclass
class IntegralEstimate:
    value: float
    abs_error: float
    evals: int
    converged: bool = True
    replicate_means: np.ndarray = field(default=None, repr=False)

    @property
    def status(self) -> str:
        return "ok" if self.converged else "tolerance_miss"

    @property
    def rel_error(self) -> float:
        return self.abs_error / abs(self.value) if self.value != 0 else math.inf


def _identity(u):
    return u, np.ones(len(u))


def _cubic(u):
    # x = u^2 (3 - 2u) per coordinate; flat at both faces, which tames
    # integrable endpoint singularities like x^(-1/2)
    x = u * u * (3.0 - 2.0 * u)
    w = np.prod(6.0 * u * (1.0 - u), axis=1)
    return x, w


_SMOOTHING = {"none": _identity, "cubic": _cubic}


def _evaluate(f, pts, smoothing=_identity):
    def chunk(p):
        x, w = smoothing(p)
        x = np.clip(x, _EDGE, 1.0 - _EDGE)
        return np.sum(w * f(x))

    if len(pts) <= _CHUNK:
        return chunk(pts)
    total = 0.0
    for i in range(0, len(pts), _CHUNK):
        total += chunk(pts[i:i + _CHUNK])
    return total


def integrate(f: Callable[[np.ndarray], np.ndarray], spec: IntegrationSpec) -> IntegralEstimate:
    """Integrate ``f`` over the open unit cube of ``spec.dimension`` dims.

    ``f`` takes an ``(N, dim)`` array and returns ``N`` values.  When the
    budget runs out before the tolerance is met the estimate is returned
    with ``converged=False``.
    """
    dim, R = spec.dimension, spec.replicates
    seeds = np.random.SeedSequence(spec.seed).spawn(R)
    engines = [qmc.Sobol(dim, scramble=True, seed=np.random.default_rng(s)) for s in seeds]
    sums = np.zeros(R)
    m = max(1, int(math.ceil(math.log2(max(spec.min_points, 2)))))
    # first batch never exceeds the budget (power of two per replicate)
    m = max(1, min(m, int(math.floor(math.log2(max(spec.max_evals // R, 2))))))
    n_per = 0
    draw = 1 << m
    g = _SMOOTHING[spec.smoothing]
    pool = ThreadPoolExecutor(spec.threads) if spec.threads > 1 else None

    def step(i):
        return _evaluate(f, engines[i].random(draw), g)

    try:
        while True:
            if pool is None:
                parts = [step(i) for i in range(R)]
            else:
                parts = list(pool.map(step, range(R)))
            sums += np.asarray(parts)
            n_per += draw
            means = sums / n_per
            value = float(np.mean(means))
            err = float(np.std(means, ddof=1) / math.sqrt(R))
            if not np.isfinite(value):
                raise FloatingPointError("integrand produced non-finite values")
            evals = n_per * R
            if err <= max(spec.tolerance * abs(value), spec.abs_tol):
                return IntegralEstimate(value, err, evals, True, means)
            # next round doubles the per-replicate sequence length
            draw = n_per
            if evals + draw * R > spec.max_evals:
                return IntegralEstimate(value, err, evals, False, means)
    finally:
        if pool is not None:
            pool.shutdown()


def _rational(s, scale):
    """(0, 1) -> (0, inf), x = scale s / (1 - s)."""
    one = 1.0 - s
    return scale * s / one, scale / (one * one)


def _truncated_cauchy(s, center, width, half_span):
    """(0, 1) -> [-half_span, half_span] with Cauchy density around ``center``."""
    lo = np.arctan((-half_span - center) / width)
    hi = np.arctan((half_span - center) / width)
    ang = lo + (hi - lo) * s
    c = np.cos(ang)
    return center + width * np.tan(ang), width * (hi - lo) / (c * c)


@dataclass
class ChartMap:
    """Change of variables from the cube to ``(kappa, u_0, ..., u_L)``.

    Calling the map returns ``(kappa, samples, weight)`` where ``weight``
    carries every Jacobian factor (chart polar radii included).
    """

    order: int
    dimension: int
    transform: Callable = field(repr=False)
    kappa_scale: float = 1.0

    def __call__(self, x: np.ndarray):
        return self.transform(x)


def surface_chart_map(cfg: WedgeConfig, order: int, spec: IntegrationSpec | None = None) -> ChartMap:
    """Cube map for the order-``order`` surface integral on the smoothed wedge.

    Coordinates: ``x[0]`` -> kappa, ``x[1:3]`` -> base point ``(t, z)`` on the
    truncated chart, then one ``(rho, alpha)`` pair per difference vector
    ``u_i - u_{i+1}``.  The polar radius Jacobian ``rho`` cancels the
    inverse-distance divergence of K at coincidence.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if cfg.R == 0.0 and cfg.theta != 0.0:
        raise ValueError("the scattering expansion needs a smoothed edge (R != 0)")
    spec = spec or IntegrationSpec(3 + 2 * order)
    dp = d_perp(cfg)
    kscale = 1.0 / dp
    t_c = foot_point(cfg)
    width = cfg.d
    T = spec.truncation[0] * cfg.d
    Z = spec.truncation[1] * cfg.d

    def transform(x):
        kappa, w = _rational(x[:, 0], kscale)
        t, jt = _truncated_cauchy(x[:, 1], t_c, width, T)
        z, jz = _truncated_cauchy(x[:, 2], 0.0, width, Z)
        w = w * jt * jz
        charts = [(t, z)]
        ell = dp / (1.0 + kappa * dp)
        for i in range(order):
            rho, jr = _rational(x[:, 3 + 2 * i], ell)
            alpha = 2 * np.pi * x[:, 4 + 2 * i]
            w = w * jr * rho * (2 * np.pi)
            t = t - rho * np.cos(alpha)
            z = z - rho * np.sin(alpha)
            charts.append((t, z))
        samples = [surface_point(cfg, tt, zz) for tt, zz in charts]
        return kappa, samples, w

    return ChartMap(order, 3 + 2 * order, transform, kscale)


def sphere_chart_map(sphere: SphereFixture, r0, order: int) -> ChartMap:
    """Cube map for closed-sphere integrals; every surface point is sampled
    independently (no singularity cancellation, used for null tests)."""
    r0 = np.asarray(r0, dtype=float)
    dist = np.linalg.norm(r0 - np.asarray(sphere.center)) - sphere.radius
    if dist <= 0:
        raise ValueError("particle must lie outside the sphere")
    kscale = 1.0 / dist

    def transform(x):
        kappa, w = _rational(x[:, 0], kscale)
        samples = []
        for i in range(order + 1):
            az = 2 * np.pi * x[:, 1 + 2 * i]
            cos_pol = 1.0 - 2.0 * x[:, 2 + 2 * i]
            pol = np.arccos(cos_pol)
            s = sphere_point(sphere.radius, az, pol, sphere.center)
            # dA = R^2 d(cos) d(az) = 4 pi R^2 per unit cube
            w = w * 4 * np.pi * sphere.radius**2
            samples.append(s)
        return kappa, samples, w

    return ChartMap(order, 3 + 2 * order, transform, kscale)
