"""Batch runs behind the command line: plate and wedge sweeps, PEC tables,
and the validation suite.  Each run returns a list of row dicts; CSV
emission lives in :func:`write_csv`.
"""

from __future__ import annotations

import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .accel import accelerate
from .config import RunConfig
from .geometry import WedgeConfig, d_perp, sharp_frame
from .green import Medium
from .mse import PotentialResult, compute_potential
from .planar import planar_orders
from .reference import (
    pec_upsilon_sharp_frame,
    pec_wedge_upsilon,
    pfa_upsilon,
    plate_upsilon,
    reduced_pec_upsilon,
)

__all__ = [
    "run_plate",
    "run_wedge",
    "run_pec_wedge",
    "run_validate",
    "write_csv",
    "shanks_error",
    "wedge_columns",
]

log = logging.getLogger(__name__)


def shanks_error(result: PotentialResult, epsilon1: float, policy_threshold: float = 50.0) -> float:
    """Error of the accelerated estimate: linear propagation of the per-order
    errors through the transform, never below their root-sum-square."""
    dU = np.asarray(result.delta_U, dtype=float)
    err = np.asarray(result.errors, dtype=float)
    if len(dU) < 3:
        return float(np.sqrt(np.sum(err**2)))

    def est(v):
        return accelerate(np.cumsum(v), epsilon1, policy_threshold).final_estimate

    base = est(dU)
    prop = 0.0
    for i in range(len(dU)):
        h = max(abs(dU[i]) * 1e-6, 1e-300)
        v = dU.copy()
        v[i] += h
        prop += ((est(v) - base) / h * err[i]) ** 2
    return float(max(math.sqrt(prop), np.sqrt(np.sum(err**2))))


def _potential(cfg: RunConfig, wedge: WedgeConfig, epsilon1: float) -> PotentialResult:
    res = compute_potential(
        wedge,
        cfg.interior(epsilon1),
        max_order=cfg.max_order,
        rel_tol=cfg.rel_tol,
        seed=cfg.seed,
        exterior=cfg.exterior,
        max_evals=cfg.max_evals,
        truncation=(cfg.t_max, cfg.z_max),
        replicates=cfg.replicates,
        policy_threshold=cfg.policy_threshold,
    )
    return res


def _order_columns(res: PotentialResult) -> dict:
    row = {}
    d4 = res.d**4
    for L, (u, e) in enumerate(zip(res.delta_U, res.errors)):
        row[f"dU{L}"] = u
        row[f"err_dU{L}"] = e
    for L, u in enumerate(res.partial_sums):
        row[f"upsilon_U{L}"] = float(-u * d4) + 0.0
    return row


def run_plate(cfg: RunConfig) -> list[dict]:
    """Half-space MSE amplitudes against the exact Lifshitz amplitude."""
    if cfg.theta != 0.0:
        raise ValueError("plate runs need theta = 0")
    rows = []
    wedge = WedgeConfig(0.0, 0.0, cfg.d, 0.0)
    for eps in cfg.epsilon1:
        exact = plate_upsilon(eps)
        res = _potential(cfg, wedge, eps)
        ups = res.upsilon
        err = shanks_error(res, eps, cfg.policy_threshold) * cfg.d**4
        spectral = -planar_orders(Medium(eps, cfg.mu1), cfg.max_order, 1.0, cfg.exterior)
        row = {"epsilon1": eps, "upsilon_exact": exact.upsilon, "err_upsilon_exact": exact.error}
        row.update(_order_columns(res))
        row["upsilon_mse"] = ups
        row["err_upsilon_mse"] = err
        row["policy"] = res.shanks_policy
        row["upsilon_spectral_U"] = float(np.sum(spectral))
        row["rel_deviation"] = (ups - exact.upsilon) / exact.upsilon if exact.upsilon else 0.0
        row["status"] = res.status
        rows.append(row)
    return rows


def wedge_columns(max_order: int) -> list[str]:
    cols = ["phi", "d_perp", "d_s", "phi_s"]
    cols += [f"dU{L}" for L in range(max_order + 1)]
    cols += [f"upsilon_U{L}" for L in range(max_order + 1)]
    cols += ["upsilon_mse", "policy", "upsilon_pec", "upsilon_pfa", "upsilon_red"]
    cols += ["ratio_pfa", "ratio_pec", "ratio_red"]
    cols += [f"err_dU{L}" for L in range(max_order + 1)]
    cols += ["err_upsilon_mse", "err_upsilon_pec", "err_upsilon_pfa", "err_upsilon_red"]
    cols += ["err_ratio_pfa", "err_ratio_pec", "err_ratio_red", "status"]
    return cols


def _wedge_row(cfg: RunConfig, phi: float) -> dict:
    eps = cfg.epsilon1[0]
    wedge = cfg.wedge(phi)
    sf = sharp_frame(wedge)
    res = _potential(cfg, wedge, eps)
    ups = res.upsilon
    err = shanks_error(res, eps, cfg.policy_threshold) * cfg.d**4
    plate = plate_upsilon(eps)
    pec = pec_upsilon_sharp_frame(wedge)
    pfa = pfa_upsilon(wedge, eps)
    red = reduced_pec_upsilon(wedge, eps)
    pfa_err = plate.error * (cfg.d / sf.d_perp) ** 4
    red_err = red * plate.error / plate.upsilon if plate.upsilon else 0.0
    row = {"phi": phi, "d_perp": sf.d_perp, "d_s": sf.d_s, "phi_s": sf.phi_s}
    row.update(_order_columns(res))
    row.update(
        upsilon_mse=ups,
        policy=res.shanks_policy,
        upsilon_pec=pec,
        upsilon_pfa=pfa,
        upsilon_red=red,
        ratio_pfa=ups / pfa,
        ratio_pec=ups / pec,
        ratio_red=ups / red,
        err_upsilon_mse=err,
        err_upsilon_pec=0.0,
        err_upsilon_pfa=pfa_err,
        err_upsilon_red=red_err,
        err_ratio_pfa=abs(ups / pfa) * math.hypot(err / ups, pfa_err / pfa),
        err_ratio_pec=abs(err / pec),
        err_ratio_red=abs(ups / red) * math.hypot(err / ups, red_err / red),
        status=res.status,
    )
    return row


def run_wedge(cfg: RunConfig) -> list[dict]:
    """Per-angle MSE amplitudes with the PEC, proximity and reduced references.

    Rows are computed concurrently up to ``cfg.threads`` and emitted in sweep
    order; a failing angle yields a row with an error status.
    """
    def task(phi):
        try:
            return _wedge_row(cfg, phi)
        except Exception as exc:  # sweep continues past a bad angle
            log.error("phi=%s failed: %s", phi, exc)
            return {"phi": phi, "status": f"error: {exc}"}

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            return list(pool.map(task, cfg.phi))
    return [task(p) for p in cfg.phi]


def run_pec_wedge(cfg: RunConfig) -> list[dict]:
    """Closed-form table: sharp PEC wedge, proximity and reduced amplitudes."""
    rows = []
    for phi in cfg.phi:
        wedge = cfg.wedge(phi)
        sf = sharp_frame(wedge)
        row = {
            "phi": phi,
            "d_perp": sf.d_perp,
            "d_s": sf.d_s,
            "phi_s": sf.phi_s,
            "upsilon_pec_sharp": pec_wedge_upsilon(cfg.theta, phi),
            "upsilon_pec": pec_upsilon_sharp_frame(wedge),
            "err_upsilon_pec": 0.0,
        }
        for eps in cfg.epsilon1:
            plate = plate_upsilon(eps)
            row[f"upsilon_pfa_eps{eps:g}"] = pfa_upsilon(wedge, eps)
            row[f"err_upsilon_pfa_eps{eps:g}"] = plate.error * (cfg.d / sf.d_perp) ** 4
            row[f"upsilon_red_eps{eps:g}"] = reduced_pec_upsilon(wedge, eps)
            row[f"err_upsilon_red_eps{eps:g}"] = (
                row[f"upsilon_red_eps{eps:g}"] * plate.error / plate.upsilon if plate.upsilon else 0.0
            )
        rows.append(row)
    return rows


def run_validate(cfg: RunConfig | None = None, inject_fault: str | None = None) -> dict:
    """Fast invariant checks; returns a report with one entry per check."""
    from .validation import run_checks

    return run_checks(cfg, inject_fault=inject_fault)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def write_csv(rows: list[dict], cfg: RunConfig, command: str, columns: list[str] | None = None,
              stream: io.TextIOBase | None = None) -> str:
    """Render rows as CSV behind a ``#`` header that echoes the config."""
    if columns is None:
        columns = []
        for r in rows:
            for k in r:
                if k not in columns:
                    columns.append(k)
    lines = [f"# cpwedge {__version__} {command}"]
    lines += [f"# {line}" for line in cfg.echo()]
    lines.append(",".join(columns))
    for r in rows:
        lines.append(",".join(_fmt(r.get(c, "")) for c in columns))
    text = "\n".join(lines) + "\n"
    if stream is not None:
        stream.write(text)
    return text


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
