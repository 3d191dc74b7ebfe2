"""Run configuration read from an INI-style key/value file.

Sections: ``media``, ``geometry``, ``sweep``, ``integration``, ``output``.
Every key is optional; defaults reproduce the convex ``epsilon1 = 10`` wedge.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import ConfigurationError, WedgeConfig
from .green import Medium

__all__ = ["RunConfig", "load_config", "parse_floats"]


def parse_floats(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


@dataclass
class RunConfig:
    epsilon0: float = 1.0
    mu0: float = 1.0
    epsilon1: list[float] = field(default_factory=lambda: [10.0])
    mu1: float = 1.0
    theta: float = 0.75
    r_over_d: float | None = None
    d: float = 1.0
    phi: list[float] = field(default_factory=lambda: [0.0])
    max_order: int = 2
    rel_tol: float | None = None
    max_evals: int = 1 << 24
    seed: int = 0
    threads: int = 1
    replicates: int = 16
    t_max: float = 12.0
    z_max: float = 12.0
    strict: bool = False
    policy_threshold: float = 50.0
    output: str | None = None

    def __post_init__(self):
        if self.r_over_d is None:
            self.r_over_d = math.copysign(0.1, self.theta) if self.theta != 0 else 0.0
        self.validate()

    def validate(self):
        try:
            Medium(self.epsilon0, self.mu0)
            for e in self.epsilon1:
                Medium(e, self.mu1)
        except ConfigurationError:
            raise
        if not self.epsilon1:
            raise ConfigurationError("at least one epsilon1 value is required")
        if self.max_order < 0:
            raise ConfigurationError("max_order must be non-negative")
        if self.rel_tol is not None and not self.rel_tol > 0:
            raise ConfigurationError("rel_tol must be positive")
        if self.threads < 1:
            raise ConfigurationError("threads must be at least 1")
        if not self.phi:
            raise ConfigurationError("empty phi sweep")
        # raises ConfigurationError on any range violation
        for p in self.phi:
            self.wedge(p)

    @property
    def exterior(self) -> Medium:
        return Medium(self.epsilon0, self.mu0)

    def interior(self, epsilon1: float | None = None) -> Medium:
        return Medium(self.epsilon1[0] if epsilon1 is None else epsilon1, self.mu1)

    def wedge(self, phi: float) -> WedgeConfig:
        return WedgeConfig(self.theta, self.r_over_d * self.d, self.d, phi)

    def echo(self) -> list[str]:
        """Config lines for a self-describing output header."""
        return [f"{k} = {v}" for k, v in asdict(self).items()]


def _sweep(section) -> list[float]:
    if "phi" in section:
        return parse_floats(section["phi"])
    if "phi_count" in section:
        lo = float(section.get("phi_min", "0"))
        hi = float(section["phi_max"])
        n = int(section["phi_count"])
        if n < 1:
            raise ConfigurationError("phi_count must be positive")
        return [float(v) for v in np.linspace(lo, hi, n)]
    return [0.0]


def load_config(path: str | None = None, text: str | None = None, **overrides) -> RunConfig:
    """Read a config file (or string) and apply CLI overrides."""
    cp = configparser.ConfigParser()
    try:
        if path is not None:
            with open(path) as fh:
                cp.read_file(fh)
        elif text is not None:
            cp.read_string(text)
    except (OSError, configparser.Error) as exc:
        raise ConfigurationError(f"cannot read config: {exc}") from exc

    kw: dict = {}
    try:
        if cp.has_section("media"):
            m = cp["media"]
            for key in ("epsilon0", "mu0", "mu1"):
                if key in m:
                    kw[key] = float(m[key])
            if "epsilon1" in m:
                kw["epsilon1"] = parse_floats(m["epsilon1"])
        if cp.has_section("geometry"):
            g = cp["geometry"]
            for key in ("theta", "r_over_d", "d"):
                if key in g:
                    kw[key] = float(g[key])
        if cp.has_section("sweep"):
            kw["phi"] = _sweep(cp["sweep"])
        if cp.has_section("integration"):
            s = cp["integration"]
            for key, conv in (("max_order", int), ("rel_tol", float), ("max_evals", int),
                              ("seed", int), ("threads", int), ("replicates", int),
                              ("t_max", float), ("z_max", float), ("policy_threshold", float)):
                if key in s:
                    kw[key] = conv(s[key])
            if "strict" in s:
                kw["strict"] = s.getboolean("strict")
        if cp.has_section("output") and "path" in cp["output"]:
            kw["output"] = cp["output"]["path"]
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc

    kw.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**kw)
