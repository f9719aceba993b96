"""
Higher time derivatives of the corrected closed-form solution near ``tf``.

With ``s = tf - t`` the solution is ``x = sign(x0) ln(1 + C1 s^eta)``. Around
a point ``s0 > 0`` the inner function expands exactly as

    C1 (s0 + h)^eta = sum_j C1 binom(eta, j) s0^(eta - j) h^j

and the logarithm of a power series ``a(h)`` follows the recurrence

    l_0 = ln a_0,    l_n = (a_n - (1/n) sum_{k=1}^{n-1} k l_k a_{n-k}) / a_0.

The k-th time derivative is then ``(-1)^k k! l_k sign(x0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .exceptions import DomainError, InconclusiveError
from .laws import PredefParams, integration_constant, sign

MAX_ORDER = 6
SLOPE_TOL = 0.1
FIT_RESIDUAL_TOL = 0.05
DEFAULT_EXPONENTS = (2, 3, 4, 5, 6)

Classification = Literal["continuous_zero", "bounded_discontinuous", "divergent"]


@dataclass(frozen=True)
class DerivativeProfile:
    order: int
    samples: tuple  # ((t, value), ...) with t increasing toward tf
    limit_estimate: float  # math.inf when diverging


@dataclass(frozen=True)
class SingularityVerdict:
    classification: Classification
    order: int
    eta: float
    slope: float = math.nan


def _binomial_series(eta, s0, n):
    """Coefficients of (s0 + h)^eta in powers of h, up to h^n."""
    coeffs = [s0**eta]
    c = 1.0
    for j in range(1, n + 1):
        c *= (eta - (j - 1)) / j
        coeffs.append(c * s0 ** (eta - j))
    return coeffs


def _log1p_series(g):
    """Taylor coefficients of ln(1 + g(h)) given those of g."""
    n = len(g) - 1
    a = [1.0 + g[0]] + list(g[1:])
    out = [math.log1p(g[0])]
    for m in range(1, n + 1):
        acc = a[m]
        for k in range(1, m):
            acc -= k * out[k] * a[m - k] / m
        out.append(acc / a[0])
    return out


def kth_derivative(t: float, x0: float, p: PredefParams, k: int) -> float:
    """k-th time derivative of the corrected closed form at ``t``.

    Raises
    ------
    DomainError
        If ``t`` is outside ``[t0, tf)`` or ``k`` is outside ``1..MAX_ORDER``.
    """
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_ORDER:
        raise DomainError(f"derivative order must be an integer in 1..{MAX_ORDER}, got {k!r}")
    hz = p.horizon
    if not hz.t0 <= t < hz.tf:
        raise DomainError(f"need t0 <= t < tf, got t={t} on [{hz.t0}, {hz.tf})")
    if x0 == 0:
        return 0.0
    c1 = integration_constant(x0, p, "corrected").value
    s0 = hz.tf - t
    g = [c1 * b for b in _binomial_series(p.eta, s0, k)]
    l_k = _log1p_series(g)[k]
    return (-1) ** k * math.factorial(k) * l_k * sign(x0)


def derivative_profile(x0, p, k, exponents=DEFAULT_EXPONENTS) -> DerivativeProfile:
    """Sample the k-th derivative at ``t = tf - 10^-m`` for each ``m``."""
    tf = p.horizon.tf
    ts = sorted(tf - 10.0 ** (-m) for m in exponents)
    samples = tuple((t, kth_derivative(t, x0, p, k)) for t in ts)
    verdict = classify_singularity(p, x0, k, exponents)
    if verdict.classification == "divergent":
        limit = math.inf
    elif verdict.classification == "continuous_zero":
        limit = 0.0
    else:
        limit = samples[-1][1]
    return DerivativeProfile(k, samples, limit)


def classify_singularity(p: PredefParams, x0: float, k: int,
                         exponents=DEFAULT_EXPONENTS) -> SingularityVerdict:
    """Classify ``d^k x/dt^k`` as ``t -> tf-`` from a log-log slope fit.

    The magnitude is sampled at ``s = 10^-m`` and regressed on ``log s``.
    A positive slope means the derivative vanishes at ``tf`` (matching the
    zero solution beyond ``tf``), a flat one means a finite jump, and a
    negative one means blow-up.

    Raises
    ------
    DomainError
        For ``x0 == 0`` or an invalid order.
    InconclusiveError
        When the samples do not follow a power law closely enough.
    """
    if x0 == 0:
        raise DomainError("x0 = 0 gives the identically zero solution; nothing to classify")
    tf = p.horizon.tf
    s = np.array([10.0 ** (-m) for m in exponents])
    vals = np.array([kth_derivative(tf - si, x0, p, k) for si in s])
    mags = np.abs(vals)
    if np.all(mags == 0):
        return SingularityVerdict("continuous_zero", k, p.eta, math.inf)
    if np.any(mags == 0) or not np.all(np.isfinite(mags)):
        raise InconclusiveError(f"degenerate derivative samples {vals.tolist()}")
    ls, lm = np.log10(s), np.log10(mags)
    slope, intercept = np.polyfit(ls, lm, 1)
    resid = np.max(np.abs(lm - (slope * ls + intercept)))
    if resid > FIT_RESIDUAL_TOL:
        raise InconclusiveError(
            f"log-log fit residual {resid:.3g} exceeds {FIT_RESIDUAL_TOL}; "
            "narrow the sampling exponents"
        )
    if slope > SLOPE_TOL:
        cls = "continuous_zero"
    elif slope < -SLOPE_TOL:
        cls = "divergent"
    else:
        cls = "bounded_discontinuous"
    return SingularityVerdict(cls, k, p.eta, float(slope))


def min_gain_for_dimension(n: int) -> float:
    """Strict lower threshold on the gain for an ``n``-dimensional chain."""
    if int(n) != n or n < 1:
        raise ValueError(f"system dimension must be a positive integer, got {n!r}")
    return float(n)
