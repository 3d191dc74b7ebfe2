"""Shanks acceleration of MSE partial sums."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["shanks", "accelerate", "AccelerationReport", "DEGENERATE_TOL"]

DEGENERATE_TOL = 1e-12


def shanks(u_prev: float, u: float, u_next: float, return_status: bool = False):
    """One Shanks step on three consecutive partial sums.

    Exact for partial sums of the form ``U + a q**l``.  When the second
    difference vanishes (relative to the sums) the sequence is treated as
    converged and ``u_next`` is returned; with ``return_status`` the result
    is ``(value, degenerate)``.
    """
    denom = u_next - 2.0 * u + u_prev
    scale = max(abs(u_prev), abs(u), abs(u_next))
    if abs(denom) <= DEGENERATE_TOL * scale or denom == 0.0:
        return (u_next, True) if return_status else u_next
    # difference form of (u_next*u_prev - u**2)/denom, less cancellation
    value = u_next - (u_next - u) ** 2 / denom
    return (value, False) if return_status else value


@dataclass
class AccelerationReport:
    input_sums: list[float]
    shanks: list[float]
    policy: str
    final_estimate: float
    spread: float
    notes: list[str] = field(default_factory=list)


def _branch(sums):
    s, degenerate = shanks(*sums[-3:], return_status=True)
    return s, abs(s - sums[-1]), degenerate


def accelerate(partials, epsilon1: float = 1.0, policy_threshold: float = 50.0) -> AccelerationReport:
    """Accelerated potential from MSE partial sums ``U_0, U_1, ...``.

    Below ``policy_threshold`` (in the interior permittivity) the estimate is
    ``S(U_1)`` built from the first three partial sums.  At or above it, even
    and odd orders are accelerated separately and the two limits summed; the
    odd branch starts from the empty sum 0, so orders through 4 suffice.
    With fewer orders the plain estimate is used and a note recorded.
    """
    sums = [float(v) for v in partials]
    if len(sums) < 3:
        raise ValueError(f"Shanks acceleration needs at least 3 partial sums, got {len(sums)}")
    transformed = [shanks(*sums[i:i + 3]) for i in range(len(sums) - 2)]
    notes = []
    if epsilon1 >= policy_threshold:
        if len(sums) >= 5:
            terms = np.diff([0.0] + sums)
            even = list(np.cumsum(terms[0::2]))
            odd = [0.0] + list(np.cumsum(terms[1::2]))
            se, spread_e, deg_e = _branch(even)
            so, spread_o, deg_o = _branch(odd)
            if deg_e or deg_o:
                notes.append("degenerate parity branch")
            return AccelerationReport(sums, transformed, "even_odd", se + so, spread_e + spread_o, notes)
        notes.append(
            f"even/odd split needs orders through 4, got {len(sums) - 1}; fell back to S(U_1)"
        )
    s1, degenerate = shanks(*sums[:3], return_status=True)
    if degenerate:
        notes.append("degenerate Shanks denominator")
    return AccelerationReport(sums, transformed, "plain", s1, abs(s1 - sums[2]), notes)
