"""
Fixed-step RK4 simulation of the scalar closed loops ``x' = u(t, x)``.

Predefined-time laws carry a ``1/(tf - t)`` factor, so integration stops a
small standoff ``terminal_margin`` before ``tf`` and a final sample
``(tf, 0, 0)`` is appended: the exact solution is identically zero from
``tf`` on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from .exceptions import IntegrationError
from .laws import (
    FixedTimeParams,
    Horizon,
    PredefParams,
    closed_form_state,
    eval_corrected_law,
    eval_fixed_time_law,
    eval_original_law,
)

LawId = Literal["original", "corrected", "fixed_time"]
LAW_IDS = ("original", "corrected", "fixed_time")
PREDEF_LAWS = ("original", "corrected")
BLOWUP_LIMIT = 1e12

Params = Union[PredefParams, FixedTimeParams]


@dataclass(frozen=True)
class IntegrationSettings:
    step: float
    terminal_margin: float
    method: str = "rk4_fixed"

    def __post_init__(self):
        if self.method != "rk4_fixed":
            raise IntegrationError(f"unsupported method {self.method!r}; only 'rk4_fixed'")
        if not self.step > 0:
            raise IntegrationError(f"step must be > 0, got {self.step}")
        if not self.terminal_margin > 0:
            raise IntegrationError(f"terminal_margin must be > 0, got {self.terminal_margin}")
        if self.step > self.terminal_margin:
            raise IntegrationError(
                f"step ({self.step}) must not exceed terminal_margin ({self.terminal_margin})"
            )

    @classmethod
    def default(cls, horizon: Horizon, step=None):
        margin = 1e-3 * horizon.duration()
        return cls(step=margin / 10 if step is None else step, terminal_margin=margin)

    def check_horizon(self, horizon: Horizon):
        if not self.terminal_margin < horizon.duration() / 2:
            raise IntegrationError(
                f"terminal_margin ({self.terminal_margin}) must be below half the "
                f"horizon duration ({horizon.duration()})"
            )


def _frozen(a):
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Trajectory:
    """Sampled ``(t, x, u)`` of one closed-loop run.

    ``clamped`` marks a final ``(tf, 0, 0)`` row appended after a
    predefined-time run; ``diverged`` marks a run cut short by blow-up.
    """

    law_id: LawId
    params: Params
    x0: float
    t: np.ndarray
    x: np.ndarray
    u: np.ndarray
    step: float
    clamped: bool = False
    diverged: bool = False
    t0: float = field(default=0.0)

    def __post_init__(self):
        for name in ("t", "x", "u"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if not (len(self.t) == len(self.x) == len(self.u)):
            raise IntegrationError("t, x and u must have equal lengths")

    def __len__(self):
        return len(self.t)

    @property
    def is_predefined(self):
        return self.law_id in PREDEF_LAWS

    def pre_clamp(self):
        """Index one past the last integrated (non-clamp) sample."""
        return len(self.t) - 1 if self.clamped else len(self.t)

    def check_invariants(self):
        """Raise ``IntegrationError`` if the stored samples are inconsistent."""
        if len(self.t) == 0:
            raise IntegrationError("empty trajectory")
        if self.t[0] != self.t0:
            raise IntegrationError(f"first sample time {self.t[0]} differs from t0 {self.t0}")
        if np.any(np.diff(self.t) <= 0):
            raise IntegrationError("sample times are not strictly increasing")
        if self.x[0] != self.x0:
            raise IntegrationError("first state sample differs from x0")
        law = rhs(self.law_id, self.params)
        for i in range(self.pre_clamp()):
            if law(self.t[i], self.x[i]) != self.u[i]:
                raise IntegrationError(f"stored u differs from the law at sample {i}")
        if self.clamped and not (
            self.t[-1] == self.params.horizon.tf and self.x[-1] == 0 and self.u[-1] == 0
        ):
            raise IntegrationError("clamp row must be (tf, 0, 0)")


def rhs(law_id: LawId, params: Params):
    """The closed-loop vector field ``f(t, x)`` for a law."""
    if law_id == "original":
        return lambda t, x: eval_original_law(t, x, params)
    if law_id == "corrected":
        return lambda t, x: eval_corrected_law(t, x, params)
    if law_id == "fixed_time":
        return lambda t, x: eval_fixed_time_law(x, params)
    raise IntegrationError(f"unknown law {law_id!r}; expected one of {LAW_IDS}")


def _check_params(law_id, params):
    want = PredefParams if law_id in PREDEF_LAWS else FixedTimeParams
    if not isinstance(params, want):
        raise IntegrationError(f"law {law_id!r} needs {want.__name__}, got {type(params).__name__}")


def rk4_step(f, t, x, h):
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _time_to_origin(x, p: FixedTimeParams):
    # upper bound from the k1 term alone; the k2 term only speeds arrival
    return abs(x) ** (1 - p.alpha) / (p.k1 * (1 - p.alpha))


def _grid(t0, t_end, step):
    # uniform grid, spacing <= step, last node exactly at t_end
    n = max(1, math.ceil((t_end - t0) / step - 1e-9))
    ts = [t0 + (t_end - t0) * i / n for i in range(n + 1)]
    ts[-1] = t_end
    return ts


def integrate(law_id: LawId, params: Params, x0: float, settings: IntegrationSettings,
              *, span=None, t0=None) -> Trajectory:
    """Integrate one closed loop from ``x(t0) = x0``.

    Parameters
    ----------
    law_id : {"original", "corrected", "fixed_time"}
    params : PredefParams or FixedTimeParams
        Must match ``law_id``.
    x0 : float
    settings : IntegrationSettings
    span : float, optional
        Fixed-time law only: length of the run (default 1.0).
    t0 : float, optional
        Fixed-time law only: start time (default 0.0). Predefined-time laws
        start at their horizon's ``t0``.

    Returns
    -------
    Trajectory
        For the fixed-time law a step during which the exact solution
        provably reaches the origin lands on zero. A blown-up run
        (non-finite state or ``|x| > 1e12``) comes back truncated with
        ``diverged=True`` rather than raising.
    """
    _check_params(law_id, params)
    x0 = float(x0)
    if not math.isfinite(x0):
        raise IntegrationError(f"x0 must be finite, got {x0}")
    f = rhs(law_id, params)
    if law_id in PREDEF_LAWS:
        hz = params.horizon
        settings.check_horizon(hz)
        if span is not None or t0 is not None:
            raise IntegrationError("span/t0 apply to the fixed-time law only")
        start, end = hz.t0, hz.tf - settings.terminal_margin
    else:
        start = 0.0 if t0 is None else float(t0)
        span = 1.0 if span is None else float(span)
        if not span > 0:
            raise IntegrationError(f"span must be > 0, got {span}")
        end = start + span

    settle_at_origin = law_id == "fixed_time"
    ts = _grid(start, end, settings.step)
    xs = [x0]
    us = [f(start, x0)]
    diverged = not math.isfinite(us[0])
    if not diverged:
        x = x0
        for i in range(len(ts) - 1):
            try:
                h = ts[i + 1] - ts[i]
                x_new = rk4_step(f, ts[i], x, h)
                if settle_at_origin and (x_new * x <= 0 or _time_to_origin(x, params) <= h):
                    # exact solutions reach 0 within this step and stay there;
                    # RK4 would instead overshoot or stall near the origin
                    x_new = 0.0
                x = x_new
                u = f(ts[i + 1], x)
            except OverflowError:
                diverged = True
                break
            if not (math.isfinite(x) and abs(x) <= BLOWUP_LIMIT and math.isfinite(u)):
                diverged = True
                break
            xs.append(x)
            us.append(u)
    ts = ts[: len(xs)]
    clamped = False
    if law_id in PREDEF_LAWS and not diverged:
        ts.append(params.horizon.tf)
        xs.append(0.0)
        us.append(0.0)
        clamped = True
    return Trajectory(law_id, params, x0, ts, xs, us, settings.step,
                      clamped=clamped, diverged=diverged, t0=start)


def solution_error(traj: Trajectory, p: PredefParams, variant) -> float:
    """Largest ``|x - x_exact|`` over the integrated (pre-clamp) samples."""
    if not traj.is_predefined:
        raise IntegrationError(f"no closed form for law {traj.law_id!r}")
    if traj.params != p:
        raise IntegrationError("trajectory was produced with different parameters")
    n = traj.pre_clamp()
    if n == 0:
        return 0.0
    exact = np.array([closed_form_state(t, traj.x0, p, variant) for t in traj.t[:n]])
    return float(np.max(np.abs(traj.x[:n] - exact)))
