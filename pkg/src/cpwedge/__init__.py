"""Casimir-Polder potential of a smoothed dielectric wedge from the surface
multiple scattering expansion."""

__version__ = "0.1.0"

from .accel import accelerate, shanks
from .geometry import ConfigurationError, SphereFixture, WedgeConfig, d_perp, sharp_frame, surface_point
from .green import Medium, VACUUM, green_blocks
from .mse import PotentialResult, compute_potential, delta_U, upsilon
from .quadrature import IntegralEstimate, IntegrationSpec, integrate
from .reference import pec_wedge_upsilon, pfa_upsilon, plate_upsilon, reduced_pec_upsilon

__all__ = [
    "ConfigurationError",
    "IntegralEstimate",
    "IntegrationSpec",
    "Medium",
    "PotentialResult",
    "SphereFixture",
    "VACUUM",
    "WedgeConfig",
    "accelerate",
    "compute_potential",
    "d_perp",
    "delta_U",
    "green_blocks",
    "integrate",
    "pec_wedge_upsilon",
    "pfa_upsilon",
    "plate_upsilon",
    "reduced_pec_upsilon",
    "sharp_frame",
    "shanks",
    "surface_point",
    "upsilon",
]
