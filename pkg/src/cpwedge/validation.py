"""Fast self-checks run by ``cpwedge validate``.

Each check returns ``(passed, detail)``.  ``inject_fault`` deliberately
breaks one check so the failure path of the report can be exercised.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .accel import shanks
from .config import RunConfig
from .geometry import WedgeConfig, d_perp, d_perp_brute_force, sharp_frame, surface_point
from .green import Medium, field_propagator, green_blocks
from .mse import delta_U
from .operators import kernel_K, kernel_M
from .planar import planar_exact
from .quadrature import IntegrationSpec
from .reference import UPSILON_PEC_PLATE, pec_wedge_upsilon, plate_upsilon

__all__ = ["run_checks", "FAULTS"]

FAULTS = ("frame_orthonormality", "reciprocity", "shanks")


def _wedges(cfg: RunConfig | None):
    out = [WedgeConfig(0.75, 0.1), WedgeConfig(-0.75, -0.1), WedgeConfig(0.3, 0.5)]
    if cfg is not None and cfg.r_over_d != 0:
        out.insert(0, cfg.wedge(cfg.phi[0]))
    return out


def check_frames(cfg, fault):
    rng = np.random.default_rng(1)
    worst = 0.0
    for w in _wedges(cfg):
        s = surface_point(w, rng.uniform(-3, 3, 2000), rng.uniform(-3, 3, 2000))
        frame = np.stack([s.normal, s.tangent_perp, s.tangent_z], axis=-2)
        if fault:
            frame[..., 2, :] += 1e-6 * frame[..., 1, :]
        gram = frame @ np.swapaxes(frame, -1, -2)
        worst = max(worst, float(np.max(np.abs(gram - np.eye(3)))))
    return worst < 1e-12, f"max |frame gram - I| = {worst:.2e}"


def check_normal_continuity(cfg, fault):
    worst = 0.0
    for w in _wedges(cfg):
        a = w.arc_half_length
        for edge in (a, -a):
            inside = surface_point(w, edge - math.copysign(1e-12, edge), 0.0).normal
            outside = surface_point(w, edge + math.copysign(1e-12, edge), 0.0).normal
            worst = max(worst, float(np.max(np.abs(inside - outside))))
    return worst < 1e-10, f"max normal jump = {worst:.2e}"


def check_d_perp(cfg, fault):
    worst = 0.0
    for w in _wedges(cfg):
        for phi in np.linspace(0, math.pi / 2 + w.theta - 0.05, 7):
            wp = w.with_phi(float(phi))
            worst = max(worst, abs(d_perp(wp) - d_perp_brute_force(wp)[0]))
    return worst < 1e-9, f"max |closed form - brute force| = {worst:.2e}"


def check_sharp_identity(cfg, fault):
    sf = sharp_frame(WedgeConfig(0.75, 0.0, 1.3, 0.4))
    ok = sf.d_s == 1.3 and abs(sf.phi_s - 0.4) < 1e-15 and sf.delta == 0.0
    return ok, f"R=0 -> d_s={sf.d_s}, phi_s={sf.phi_s}"


def check_reciprocity(cfg, fault):
    rng = np.random.default_rng(2)
    r, rp = rng.normal(size=(50, 3)), rng.normal(size=(50, 3))
    m = Medium(3.0, 1.5)
    a = green_blocks(m, 0.7, r, rp)
    b = green_blocks(m, 0.7, rp, r)
    if fault:
        b.EH = -b.EH
    dev = max(
        float(np.max(np.abs(a.EE - np.swapaxes(b.EE, -1, -2)))),
        float(np.max(np.abs(a.HH - np.swapaxes(b.HH, -1, -2)))),
        float(np.max(np.abs(a.EH + np.swapaxes(b.HE, -1, -2)))),
    )
    return dev < 1e-14, f"max reciprocity defect = {dev:.2e}"


def check_matched_null(cfg, fault):
    w = WedgeConfig(0.75, 0.1)
    rng = np.random.default_rng(3)
    u = surface_point(w, rng.uniform(-2, 2, 500), rng.uniform(-2, 2, 500))
    up = surface_point(w, rng.uniform(-2, 2, 500), rng.uniform(-2, 2, 500))
    m = Medium(2.5, 1.0)
    K = kernel_K(u, up, rng.uniform(0.1, 3, 500), (m, m))
    return bool(np.all(K == 0.0)), f"max |K| for matched media = {np.max(np.abs(K)):.1e}"


def check_tangentiality(cfg, fault):
    w = WedgeConfig(0.75, 0.1, 1.0, 0.3)
    rng = np.random.default_rng(4)
    u = surface_point(w, rng.uniform(-2, 2, 500), rng.uniform(-2, 2, 500))
    m1, m0 = Medium(10.0), Medium()
    M = kernel_M(u, w.particle, 1.0, (m1, m0))
    # frame components re-expanded must equal the full 3D n x (field)
    F_HE = field_propagator(m0, 1.0, u.position, w.particle)[..., 1, 0, :, :]
    full = np.cross(u.normal[:, :, None], F_HE, axis=1) * (2.0 / (m1.mu + m0.mu))
    T = np.stack([u.tangent_perp, u.tangent_z], axis=-1)
    rebuilt = T @ M[:, 0:2, :]
    dev = float(np.max(np.abs(rebuilt - full)))
    return dev < 1e-12, f"max |frame rebuild - n x field| = {dev:.1e}"


def check_shanks(cfg, fault):
    worst = 0.0
    for a, q in [(1.0, 0.5), (0.07, 0.1), (-2.0, -0.3), (5.0, 0.9)]:
        sums = [a * (1 - q ** (n + 1)) / (1 - q) for n in range(3)]
        lim = a / (1 - q)
        val = shanks(*sums)
        if fault:
            val *= 1.01
        worst = max(worst, abs(val - lim) / abs(lim))
    return worst < 1e-12, f"max relative defect = {worst:.1e}"


def check_reference_anchor(cfg, fault):
    a = abs(pec_wedge_upsilon(0.0, 0.0) - UPSILON_PEC_PLATE)
    b = abs(plate_upsilon(1e8).upsilon / UPSILON_PEC_PLATE - 1)
    return a < 1e-15 and b < 1e-3, f"PEC plate defect {a:.1e}, eps->inf rel defect {b:.1e}"


def check_planar_sum(cfg, fault):
    worst = 0.0
    for eps in (3.0, 10.0):
        exact = plate_upsilon(eps).upsilon
        worst = max(worst, abs(-planar_exact(Medium(eps), n_radial=40) - exact) / exact)
    return worst < 1e-6, f"resummed spectral series vs Lifshitz rel dev = {worst:.1e}"


def check_sphere_null(cfg, fault):
    from .geometry import SphereFixture

    sphere = SphereFixture(1.0)
    r0 = np.array([1.5, 0.0, 0.0])
    m = Medium(4.0)
    spec = IntegrationSpec(3, rel_tol=0.05, max_evals=1 << 18, seed=7, abs_tol=1e-12)
    null = delta_U(0, sphere, (Medium(), Medium()), spec, r0=r0)
    scale = delta_U(0, sphere, (m, Medium()), spec, r0=r0)
    ratio = abs(null.value) / abs(scale.value)
    return ratio < 5e-3, f"matched/contrast order-0 ratio = {ratio:.1e}"


CHECKS = [
    ("frame_orthonormality", check_frames),
    ("normal_continuity", check_normal_continuity),
    ("d_perp_brute_force", check_d_perp),
    ("sharp_frame_identity", check_sharp_identity),
    ("reciprocity", check_reciprocity),
    ("matched_media_K", check_matched_null),
    ("M_tangential", check_tangentiality),
    ("shanks", check_shanks),
    ("reference_anchor", check_reference_anchor),
    ("planar_resummation", check_planar_sum),
    ("sphere_extinction", check_sphere_null),
]


def run_checks(cfg: RunConfig | None = None, inject_fault: str | None = None) -> dict:
    if inject_fault is not None and inject_fault not in FAULTS:
        raise ValueError(f"unknown fault {inject_fault!r}; choose from {FAULTS}")
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(cfg, inject_fault == name)
        except Exception as exc:
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append({"name": name, "passed": bool(ok), "detail": detail,
                        "seconds": round(time.perf_counter() - t0, 3)})
    return {"passed": all(r["passed"] for r in results), "checks": results}
