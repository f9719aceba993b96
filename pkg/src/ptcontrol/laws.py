"""
Scalar predefined-time and fixed-time control laws.

Three right-hand sides are provided:

* ``eval_original_law``   u = -eta (e^x - 1) / (e^x (tf - t))
* ``eval_corrected_law``  u = -eta (e^|x| - 1) / (e^|x| (tf - t)) sign(x)
* ``eval_fixed_time_law`` u = -k1 |x|^alpha sign(x) - k2 |x|^beta sign(x)

together with the closed-form solutions of the two predefined-time systems.
Everything here is a pure function of its arguments and works on Python
floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .exceptions import DomainError

Variant = Literal["original", "corrected"]
VARIANTS = ("original", "corrected")


@dataclass(frozen=True)
class Horizon:
    """Time window ``(t0, tf)`` on which the state is driven to zero."""

    t0: float
    tf: float

    def __post_init__(self):
        if not (math.isfinite(self.t0) and math.isfinite(self.tf)):
            raise ValueError(f"horizon bounds must be finite, got ({self.t0}, {self.tf})")
        if not self.t0 < self.tf:
            raise ValueError(f"horizon requires t0 < tf, got t0={self.t0}, tf={self.tf}")

    def duration(self) -> float:
        return self.tf - self.t0


@dataclass(frozen=True)
class PredefParams:
    """Gain ``eta > 1`` and the convergence horizon."""

    eta: float
    horizon: Horizon

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta > 1):
            raise ValueError(f"eta must be a finite number > 1, got {self.eta}")

    @classmethod
    def make(cls, eta, t0=0.0, tf=1.0):
        return cls(float(eta), Horizon(float(t0), float(tf)))

    @property
    def t0(self) -> float:
        return self.horizon.t0

    @property
    def tf(self) -> float:
        return self.horizon.tf

    def initial_bound(self) -> float:
        """``eta / (tf - t0)``, the bound on the corrected law at ``t0``."""
        return self.eta / self.horizon.duration()


@dataclass(frozen=True)
class FixedTimeParams:
    """Gains and exponents of the fixed-time law."""

    k1: float
    k2: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.k1 > 0:
            raise ValueError(f"k1 must be > 0, got {self.k1}")
        if not self.k2 > 0:
            raise ValueError(f"k2 must be > 0, got {self.k2}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > 1):
            raise ValueError(f"beta must be a finite number > 1, got {self.beta}")


@dataclass(frozen=True)
class IntegrationConstant:
    value: float
    variant: Variant


def sign(x: float) -> float:
    """Sign with ``sign(0) == 0``."""
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _time_to_go(t, p):
    s = p.horizon.tf - t
    if not s > 0:
        raise DomainError(f"law is singular for t >= tf (t={t}, tf={p.horizon.tf})")
    return s


def _pull_toward_origin(x, s, eta):
    # -eta * (1 - e^-x) / s, with (e^x - 1)/e^x written as -expm1(-x).
    if x == 0:
        return 0.0
    try:
        frac = -math.expm1(-x)
    except OverflowError:
        # x below about -709: the factor is -inf
        return math.inf
    gain = eta / s
    mag = gain * frac
    if x > 0 and mag >= gain:
        # Exact magnitude is gain*(1 - e^-x) < gain; rounding saturates it for
        # x >~ 37. Round toward zero to keep the strict inequality.
        mag = math.nextafter(gain, 0.0)
    return -mag


def eval_original_law(t: float, x: float, p: PredefParams) -> float:
    """Original predefined-time law; unbounded as ``x -> -inf``.

    Raises
    ------
    DomainError
        If ``t >= tf``.
    """
    s = _time_to_go(t, p)
    return _pull_toward_origin(x, s, p.eta)


def eval_corrected_law(t: float, x: float, p: PredefParams) -> float:
    """Corrected law: odd in ``x``, with ``|u| < eta/(tf - t)`` for every finite ``x``.

    Raises
    ------
    DomainError
        If ``t >= tf``.
    """
    s = _time_to_go(t, p)
    if x == 0:
        return 0.0
    u = _pull_toward_origin(abs(x), s, p.eta)
    return u if x > 0 else -u


def eval_fixed_time_law(x: float, p: FixedTimeParams) -> float:
    if x == 0:
        return 0.0
    ax = abs(x)
    mag = p.k1 * ax**p.alpha + p.k2 * ax**p.beta
    return -mag if x > 0 else mag


def eval_predef_law(variant: Variant, t: float, x: float, p: PredefParams) -> float:
    _check_variant(variant)
    if variant == "original":
        return eval_original_law(t, x, p)
    return eval_corrected_law(t, x, p)


def integration_constant(x0: float, p: PredefParams, variant: Variant) -> IntegrationConstant:
    """Constant ``C`` (original) or ``C1`` (corrected) of the closed-form solution."""
    _check_variant(variant)
    y0 = x0 if variant == "original" else abs(x0)
    return IntegrationConstant(math.expm1(y0) / p.horizon.duration() ** p.eta, variant)


def closed_form_state(t: float, x0: float, p: PredefParams, variant: Variant) -> float:
    """Exact state at time ``t`` starting from ``x(t0) = x0``.

    Returns exactly ``0.0`` for ``t >= tf``.

    The solution ``ln(C (tf - t)^eta + 1)`` is evaluated through the ratio
    ``r = ((tf - t)/(tf - t0))^eta`` so that ``C (tf - t)^eta == expm1(x0) * r``
    and ``r == 1`` exactly at ``t == t0``. This keeps the initial condition
    reproduced to rounding even when ``e^x0`` is far from 1.
    """
    _check_variant(variant)
    hz = p.horizon
    if t < hz.t0:
        raise DomainError(f"closed form is defined for t >= t0 (t={t}, t0={hz.t0})")
    if t >= hz.tf:
        return 0.0
    if x0 == 0:
        return 0.0
    y0 = x0 if variant == "original" else abs(x0)
    r = ((hz.tf - t) / hz.duration()) ** p.eta
    g = math.expm1(y0) * r
    if g > -0.5:
        y = math.log1p(g)
    else:
        # 1 + g = (1 - r) + r e^y0, free of the cancellation in 1 + expm1(y0)
        y = math.log((1.0 - r) + r * math.exp(y0))
    if variant == "corrected" and x0 < 0:
        return -y
    return y
