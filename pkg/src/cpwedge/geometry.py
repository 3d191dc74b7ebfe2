"""Smoothed-wedge and sphere surface parametrizations.

Coordinates: the smooth tip sits at the origin, the symmetry axis of the
wedge is +x (pointing into the vacuum side), the edge runs along z.  The
cross section is an arc of radius ``R`` around ``(-R, 0)`` for
``|t| <= |R*theta|`` continued tangentially by two planar faces.  The chart
``(t, z)`` is arc length across the edge and Cartesian length along it, so
the surface element is exactly ``dt dz``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConfigurationError",
    "WedgeConfig",
    "SurfaceSample",
    "SharpFrameCoords",
    "surface_point",
    "d_perp",
    "d_perp_brute_force",
    "foot_point",
    "sharp_frame",
    "sphere_point",
    "SphereFixture",
]


class ConfigurationError(ValueError):
    """Raised for geometry or medium parameters outside their valid range."""


@dataclass(frozen=True)
class WedgeConfig:
    """Smoothed wedge geometry and particle position.

    ``theta`` is the half-angle offset of the faces (``theta > 0`` convex,
    ``theta < 0`` concave), ``R`` the signed smoothing radius, ``d`` the
    particle distance from the smooth tip and ``phi`` its polar angle from
    the symmetry axis.
    """

    theta: float
    R: float
    d: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        th, R, d, phi = self.theta, self.R, self.d, self.phi
        if not all(np.isfinite([th, R, d, phi])):
            raise ConfigurationError("wedge parameters must be finite")
        if not (-np.pi / 2 < th <= np.pi / 2):
            raise ConfigurationError(f"theta={th} outside (-pi/2, pi/2]")
        if th != 0.0 and R != 0.0 and np.sign(R) != np.sign(th):
            raise ConfigurationError("R must carry the sign of theta")
        if d <= 0:
            raise ConfigurationError(f"d={d} must be positive")
        if not (0.0 <= phi < np.pi / 2 + th):
            raise ConfigurationError(f"phi={phi} outside [0, pi/2 + theta)")
        if d_perp(self) <= 0:
            raise ConfigurationError("particle is not outside the body")

    @property
    def arc_half_length(self) -> float:
        return abs(self.R * self.theta)

    @property
    def particle(self) -> np.ndarray:
        return self.d * np.array([np.cos(self.phi), np.sin(self.phi), 0.0])

    @property
    def is_sharp(self) -> bool:
        return self.R == 0.0 and self.theta != 0.0

    def with_phi(self, phi: float) -> "WedgeConfig":
        return WedgeConfig(self.theta, self.R, self.d, phi)

    def scaled(self, lam: float) -> "WedgeConfig":
        return WedgeConfig(self.theta, lam * self.R, lam * self.d, self.phi)


@dataclass
class SurfaceSample:
    """Surface points with their orthonormal frames.

    All vector fields have shape ``(..., 3)``; ``chart`` has shape
    ``(..., 2)`` and ``jacobian`` the leading batch shape.
    """

    position: np.ndarray
    normal: np.ndarray
    tangent_perp: np.ndarray
    tangent_z: np.ndarray
    chart: np.ndarray
    jacobian: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.jacobian is None:
            self.jacobian = np.ones(self.position.shape[:-1])

    @property
    def tangents(self) -> np.ndarray:
        """Tangent frame as columns, shape ``(..., 3, 2)``."""
        return np.stack([self.tangent_perp, self.tangent_z], axis=-1)

    def __len__(self):
        return self.position.shape[0]


@dataclass(frozen=True)
class SharpFrameCoords:
    d_s: float
    phi_s: float
    delta: float
    d_perp: float


def _cross_section(theta: float, R: float, t: np.ndarray):
    """Position and unit tangent of the cross-section curve at arc length t."""
    t = np.asarray(t, dtype=float)
    a = abs(R * theta)
    s = np.abs(t)
    sgn = np.where(t < 0, -1.0, 1.0)
    x = np.empty_like(s)
    y = np.empty_like(s)
    tx = np.empty_like(s)
    ty = np.empty_like(s)

    on_arc = s <= a
    if R != 0.0:
        ang = s[on_arc] / R
        x[on_arc] = -R + R * np.cos(ang)
        y[on_arc] = R * np.sin(ang)
        tx[on_arc] = -np.sin(ang)
        ty[on_arc] = np.cos(ang)
        x0 = -R + R * np.cos(theta)
        y0 = R * np.sin(theta)
    else:
        x[on_arc] = 0.0
        y[on_arc] = 0.0
        tx[on_arc] = -np.sin(theta)
        ty[on_arc] = np.cos(theta)
        x0 = y0 = 0.0
    face = ~on_arc
    ds = s[face] - a
    x[face] = x0 - ds * np.sin(theta)
    y[face] = y0 + ds * np.cos(theta)
    tx[face] = -np.sin(theta)
    ty[face] = np.cos(theta)
    # lower half is the mirror image y -> -y; the tangent keeps pointing to +t
    return x, sgn * y, (sgn * tx, ty)


def surface_point(cfg: WedgeConfig, t, z) -> SurfaceSample:
    """Evaluate the smoothed wedge surface at chart coordinates ``(t, z)``.

    Accepts scalars or arrays of matching shape.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=float)
    t, z = np.broadcast_arrays(t, z)
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(z))):
        raise ValueError("chart coordinates must be finite")
    x, y, (tx, ty) = _cross_section(cfg.theta, cfg.R, t)
    zeros = np.zeros_like(x)
    ones = np.ones_like(x)
    position = np.stack([x, y, z], axis=-1)
    tangent_perp = np.stack([tx, ty, zeros], axis=-1)
    tangent_z = np.stack([zeros, zeros, ones], axis=-1)
    normal = np.stack([ty, -tx, zeros], axis=-1)
    return SurfaceSample(
        position=position,
        normal=normal,
        tangent_perp=tangent_perp,
        tangent_z=tangent_z,
        chart=np.stack([t, z], axis=-1),
    )


def d_perp(cfg: WedgeConfig) -> float:
    """Shortest distance from the particle to the smoothed wedge surface."""
    th, R, d, phi = cfg.theta, cfg.R, cfg.d, cfg.phi
    if _on_arc(cfg):
        return float(np.sqrt(d * d + R * R + 2 * d * R * np.cos(phi)) - R)
    return float(d * np.cos(th - phi) + R * (np.cos(th) - 1.0))


def _branch_angle(theta: float, R: float, d: float) -> float:
    """Angle separating the arc and face branches (nan if every angle is on the arc)."""
    return theta + np.arcsin(R / d * np.sin(theta))


def _on_arc(cfg: WedgeConfig) -> bool:
    # equivalent to phi < branch angle, but defined for R sin(theta) > d too
    ang = np.arctan2(cfg.d * np.sin(cfg.phi), cfg.d * np.cos(cfg.phi) + cfg.R)
    return bool(ang < cfg.theta)


def d_perp_branches(cfg: WedgeConfig) -> tuple[float, float]:
    """Both closed-form branches evaluated at the configured angle."""
    th, R, d, phi = cfg.theta, cfg.R, cfg.d, cfg.phi
    b1 = np.sqrt(d * d + R * R + 2 * d * R * np.cos(phi)) - R
    b2 = d * np.cos(th - phi) + R * (np.cos(th) - 1.0)
    return float(b1), float(b2)


def foot_point(cfg: WedgeConfig) -> float:
    """Chart coordinate ``t`` of the surface point closest to the particle."""
    th, R, d, phi = cfg.theta, cfg.R, cfg.d, cfg.phi
    if _on_arc(cfg):
        if R == 0.0:
            return 0.0
        # the arc normal points from the arc center (-R, 0) to the particle
        ang = np.arctan2(d * np.sin(phi), d * np.cos(phi) + R)
        return float(R * ang)
    # upper face: project onto the face line
    x0 = -R + R * np.cos(th)
    y0 = R * np.sin(th)
    r0 = cfg.particle
    along = (r0[0] - x0) * (-np.sin(th)) + (r0[1] - y0) * np.cos(th)
    return float(cfg.arc_half_length + along)


def d_perp_brute_force(cfg: WedgeConfig, span: float = 20.0, n: int = 200001) -> tuple[float, float]:
    """Minimum particle distance over a dense sampling of the cross section.

    Returns ``(distance, t_min)``; the minimum is refined with a bounded
    scalar search around the best grid node.
    """
    from scipy.optimize import minimize_scalar

    span = span * cfg.d
    t = np.linspace(-span, span, n)
    x, y, _ = _cross_section(cfg.theta, cfg.R, t)
    r0 = cfg.particle
    dist = np.hypot(x - r0[0], y - r0[1])
    i = int(np.argmin(dist))
    h = t[1] - t[0]

    def f(s):
        xs, ys, _ = _cross_section(cfg.theta, cfg.R, np.array([s]))
        return float(np.hypot(xs[0] - r0[0], ys[0] - r0[1]))

    res = minimize_scalar(f, bounds=(t[i] - h, t[i] + h), method="bounded",
                          options={"xatol": 1e-14})
    return float(res.fun), float(res.x)


def sharp_frame(cfg: WedgeConfig) -> SharpFrameCoords:
    """Particle coordinates relative to the edge of the equivalent sharp wedge."""
    th, R, d, phi = cfg.theta, cfg.R, cfg.d, cfg.phi
    delta = R * (1.0 / np.cos(th) - 1.0)
    d_s = np.sqrt(d * d - 2 * d * R * np.cos(phi) * (1.0 / np.cos(th) - 1.0) + delta * delta)
    phi_s = np.arctan2(d * np.sin(phi), R + d * np.cos(phi) - R / np.cos(th))
    return SharpFrameCoords(float(d_s), float(phi_s), float(delta), d_perp(cfg))


@dataclass(frozen=True)
class SphereFixture:
    """Closed test surface: a sphere of ``radius`` centred at ``center``."""

    radius: float
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigurationError(f"sphere radius {self.radius} must be positive")


def sphere_point(radius: float, azimuth, polar, center=(0.0, 0.0, 0.0)) -> SurfaceSample:
    """Point on a sphere with outward normal and tangents along the polar
    and azimuthal directions (normal = tangent_perp x tangent_z)."""
    if not radius > 0:
        raise ConfigurationError(f"sphere radius {radius} must be positive")
    az = np.asarray(azimuth, dtype=float)
    po = np.asarray(polar, dtype=float)
    az, po = np.broadcast_arrays(az, po)
    sp, cp = np.sin(po), np.cos(po)
    sa, ca = np.sin(az), np.cos(az)
    normal = np.stack([sp * ca, sp * sa, cp], axis=-1)
    e_polar = np.stack([cp * ca, cp * sa, -sp], axis=-1)
    e_az = np.stack([-sa, ca, np.zeros_like(az)], axis=-1)
    position = np.asarray(center, dtype=float) + radius * normal
    return SurfaceSample(
        position=position,
        normal=normal,
        tangent_perp=e_polar,
        tangent_z=e_az,
        chart=np.stack([az, po], axis=-1),
        jacobian=radius**2 * sp,
    )
