"""
Checks on simulated and closed-form predefined-time runs: the initial-control
bound scan, the mean-value speed requirement, and where the control peaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .exceptions import IntegrationError
from .integrator import (
    IntegrationSettings,
    Trajectory,
    integrate,
    rhs,
    rk4_step,
)
from .laws import (
    PredefParams,
    closed_form_state,
    eval_corrected_law,
    eval_original_law,
    eval_predef_law,
)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2

Location = Literal["initial", "interior", "terminal_standoff"]


@dataclass(frozen=True)
class PeakReport:
    t_peak: float
    u_peak: float
    magnitude: float
    location: Location


@dataclass(frozen=True)
class BoundScanRow:
    x0: float
    u0_original: float
    u0_corrected: float
    bound: float


@dataclass(frozen=True)
class VelocityCheck:
    holds: bool
    max_speed: float
    required: float


def golden_section_max(f, a, b, tol=1e-12, max_iter=200):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, f(a)
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _usable(traj):
    if len(traj) == 0:
        raise IntegrationError("empty trajectory")
    if traj.diverged:
        raise IntegrationError("trajectory diverged; no peak or speed analysis possible")


def _closed_loop_control(traj):
    """Signed control as a continuous function of time between samples."""
    if traj.is_predefined:
        p, x0, law = traj.params, traj.x0, traj.law_id
        return lambda t: eval_predef_law(law, t, closed_form_state(t, x0, p, law), p)

    # fixed-time law: no closed form, re-integrate finely from the sample at
    # or before t
    f = rhs(traj.law_id, traj.params)
    fine = traj.step / 64

    def control(t):
        i = max(int(np.searchsorted(traj.t, t, side="right")) - 1, 0)
        t_i, x = float(traj.t[i]), float(traj.x[i])
        n = math.ceil((t - t_i) / fine) if t > t_i else 0
        for j in range(n):
            x = rk4_step(f, t_i + (t - t_i) * j / n, x, (t - t_i) / n)
        return f(t, x)

    return control


def find_peak(traj: Trajectory) -> PeakReport:
    """Locate the largest ``|u|`` of a run, refined between samples.

    The coarse maximum over the stored samples is bracketed by its two
    neighbours and refined by golden-section search on ``|u(t)|``; the
    refined point replaces the coarse one only if it is at least as large.
    The peak counts as ``initial`` within two integration steps of ``t0``
    and ``terminal_standoff`` within two steps of the last integrated sample.
    """
    _usable(traj)
    n = traj.pre_clamp()
    absu = np.abs(traj.u[:n])
    i = int(np.argmax(absu))
    t_best, u_best = float(traj.t[i]), float(traj.u[i])
    lo, hi = float(traj.t[max(i - 1, 0)]), float(traj.t[min(i + 1, n - 1)])
    if hi > lo:
        control = _closed_loop_control(traj)
        t_ref, m_ref = golden_section_max(lambda t: abs(control(t)), lo, hi)
        if m_ref > abs(u_best):
            t_best, u_best = t_ref, control(t_ref)

    loc_tol = 2 * traj.step
    if t_best <= traj.t0 + loc_tol:
        location = "initial"
    elif t_best >= traj.t[n - 1] - loc_tol:
        location = "terminal_standoff"
    else:
        location = "interior"
    return PeakReport(t_best, u_best, abs(u_best), location)


def initial_bound_scan(p: PredefParams, x0_grid) -> list:
    """Both predefined-time laws evaluated at ``t0`` for each initial state."""
    x0_grid = list(x0_grid)
    if not x0_grid:
        raise ValueError("x0 grid must not be empty")
    t0, bound = p.horizon.t0, p.initial_bound()
    return [
        BoundScanRow(float(x0), eval_original_law(t0, x0, p), eval_corrected_law(t0, x0, p), bound)
        for x0 in x0_grid
    ]


def velocity_lower_bound_check(traj: Trajectory) -> VelocityCheck:
    """Compare the fastest sampled ``|x'|`` with ``|x0| / (tf - t0)``.

    Moving from ``x0`` to zero over the horizon forces the speed to reach
    that average somewhere; stored ``u`` samples are ``x'`` exactly.
    """
    _usable(traj)
    if not traj.is_predefined:
        raise IntegrationError("speed requirement applies to predefined-time laws only")
    if not traj.clamped:
        raise IntegrationError("trajectory did not reach the terminal clamp")
    required = abs(traj.x0) / traj.params.horizon.duration()
    max_speed = float(np.max(np.abs(traj.u)))
    return VelocityCheck(max_speed >= required * (1 - 1e-6), max_speed, required)


def peak_growth_curve(p: PredefParams, x0_grid, settings: IntegrationSettings | None = None,
                      law_id="corrected") -> list:
    """Peak ``|u|`` of the closed loop for each nonzero initial state, in grid order."""
    settings = settings or IntegrationSettings.default(p.horizon)
    out = []
    for x0 in x0_grid:
        if x0 == 0:
            raise ValueError("peak growth curve needs nonzero initial states")
        traj = integrate(law_id, p, x0, settings)
        out.append((float(x0), find_peak(traj).magnitude))
    return out
