"""
Scenario files and the on-disk formats for trajectories and reports.

A scenario is an INI-style file: ``[section]`` headers followed by flat
``key = value`` lines, ``#`` comments, comma-separated lists. See README.md
for the full grammar.
"""

from __future__ import annotations

import configparser
import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .derivatives import MAX_ORDER
from .exceptions import ScenarioError
from .integrator import LAW_IDS, PREDEF_LAWS, IntegrationSettings, Trajectory
from .laws import FixedTimeParams, Horizon, PredefParams

SCHEMA_VERSION = 1
ANALYSES = ("simulate", "peaks", "bound_scan", "velocity_check", "singularity", "compare")

_KEYS = {
    "scenario": {"name", "law", "x0", "analyses"},
    "horizon": {"t0", "tf"},
    "predefined": {"eta"},
    "fixed_time": {"k1", "k2", "alpha", "beta", "span"},
    "integration": {"step", "terminal_margin", "method"},
    "bound_scan": {"x0"},
    "singularity": {"orders"},
    "compare": {"predefined_law", "fixed_law", "x0"},
}
_REQUIRED = {
    "scenario": ("law", "x0"),
    "horizon": ("t0", "tf"),
    "predefined": ("eta",),
    "fixed_time": ("k1", "k2", "alpha", "beta"),
}


@dataclass(frozen=True)
class LawConfig:
    """One closed loop: law, its parameters, an initial state and settings."""

    law_id: str
    params: object
    x0: float
    settings: IntegrationSettings
    span: float | None = None
    t0: float | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    law_id: str
    x0: tuple
    horizon: Horizon
    settings: IntegrationSettings
    analyses: tuple
    predef: PredefParams | None = None
    fixed: FixedTimeParams | None = None
    span: float | None = None
    bound_grid: tuple = ()
    orders: tuple = (1, 2, 3)
    compare_laws: tuple = ("corrected", "fixed_time")
    compare_x0: tuple = ()

    @property
    def params(self):
        return self.predef if self.law_id in PREDEF_LAWS else self.fixed

    def law_config(self, law_id, x0) -> LawConfig:
        if law_id in PREDEF_LAWS:
            if self.predef is None:
                raise ScenarioError(f"law {law_id!r} needs a [predefined] section")
            return LawConfig(law_id, self.predef, x0, self.settings)
        if self.fixed is None:
            raise ScenarioError(f"law {law_id!r} needs a [fixed_time] section")
        span = self.span if self.span is not None else self.horizon.duration()
        return LawConfig(law_id, self.fixed, x0, self.settings, span=span, t0=self.horizon.t0)


def _number(section, key, raw):
    try:
        v = float(raw)
    except ValueError:
        raise ScenarioError(f"[{section}] {key}: not a number: {raw!r}", "parse") from None
    if not math.isfinite(v):
        raise ScenarioError(f"[{section}] {key}: must be finite, got {raw!r}")
    return v


def _numbers(section, key, raw):
    items = [s.strip() for s in raw.split(",")]
    if items == [""]:
        return ()
    if "" in items:
        raise ScenarioError(f"[{section}] {key}: empty list item in {raw!r}", "parse")
    return tuple(_number(section, key, s) for s in items)


def _names(raw):
    return tuple(s.strip() for s in raw.split(",") if s.strip())


def _build(section, fn, *args):
    try:
        return fn(*args)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"[{section}] {exc}") from None


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text.

    Raises
    ------
    ScenarioError
        ``category == "parse"`` for malformed text or values,
        ``"validation"`` for values that break a parameter constraint.
    """
    cp = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#",), comment_prefixes=("#",)
    )
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(str(exc).splitlines()[0], "parse") from None

    for sec in cp.sections():
        if sec not in _KEYS:
            raise ScenarioError(f"unknown section [{sec}]; expected one of {sorted(_KEYS)}")
        for key in cp[sec]:
            if key not in _KEYS[sec]:
                raise ScenarioError(f"[{sec}] unknown key {key!r}; allowed: {sorted(_KEYS[sec])}")
    for sec in ("scenario", "horizon"):
        if not cp.has_section(sec):
            raise ScenarioError(f"missing required section [{sec}]")

    def need(sec):
        for key in _REQUIRED.get(sec, ()):
            if key not in cp[sec]:
                raise ScenarioError(f"[{sec}] missing required key {key!r}")
        return cp[sec]

    sc = need("scenario")
    law = sc["law"].strip()
    if law not in LAW_IDS:
        raise ScenarioError(f"[scenario] law: must be one of {LAW_IDS}, got {law!r}")
    x0 = _numbers("scenario", "x0", sc["x0"])
    if not x0:
        raise ScenarioError("[scenario] x0: list must not be empty")
    analyses = _names(sc.get("analyses", "simulate"))
    for a in analyses:
        if a not in ANALYSES:
            raise ScenarioError(f"[scenario] analyses: unknown analysis {a!r}; allowed: {ANALYSES}")

    hz = need("horizon")
    horizon = _build("horizon", Horizon,
                     _number("horizon", "t0", hz["t0"]), _number("horizon", "tf", hz["tf"]))

    predef = fixed = span = None
    if cp.has_section("predefined"):
        eta = _number("predefined", "eta", need("predefined")["eta"])
        predef = _build("predefined", PredefParams, eta, horizon)
    if cp.has_section("fixed_time"):
        ft = need("fixed_time")
        vals = [_number("fixed_time", k, ft[k]) for k in ("k1", "k2", "alpha", "beta")]
        fixed = _build("fixed_time", FixedTimeParams, *vals)
        if "span" in ft:
            span = _number("fixed_time", "span", ft["span"])
            if not span > 0:
                raise ScenarioError(f"[fixed_time] span: must be > 0, got {span}")

    if cp.has_section("integration"):
        it = cp["integration"]
        default = IntegrationSettings.default(horizon)
        step = _number("integration", "step", it["step"]) if "step" in it else default.step
        margin = (_number("integration", "terminal_margin", it["terminal_margin"])
                  if "terminal_margin" in it else default.terminal_margin)
        settings = _build("integration", IntegrationSettings, step, margin,
                          it.get("method", "rk4_fixed").strip())
    else:
        settings = IntegrationSettings.default(horizon)
    if law in PREDEF_LAWS:
        _build("integration", settings.check_horizon, horizon)

    uses_predef = law in PREDEF_LAWS or any(
        a in analyses for a in ("bound_scan", "singularity", "compare"))
    if uses_predef and predef is None:
        raise ScenarioError("missing required section [predefined] (needed for the law or analyses)")
    if (law == "fixed_time" or "compare" in analyses) and fixed is None:
        raise ScenarioError("missing required section [fixed_time] (needed for the law or analyses)")
    if "velocity_check" in analyses and law not in PREDEF_LAWS:
        raise ScenarioError("[scenario] analyses: velocity_check needs a predefined-time law")

    bound_grid = x0
    if cp.has_section("bound_scan") and "x0" in cp["bound_scan"]:
        bound_grid = _numbers("bound_scan", "x0", cp["bound_scan"]["x0"])
        if not bound_grid:
            raise ScenarioError("[bound_scan] x0: list must not be empty")

    orders = (1, 2, 3)
    if cp.has_section("singularity") and "orders" in cp["singularity"]:
        raw = _numbers("singularity", "orders", cp["singularity"]["orders"])
        if not raw or any(o != int(o) or not 1 <= o <= MAX_ORDER for o in raw):
            raise ScenarioError(f"[singularity] orders: need integers in 1..{MAX_ORDER}, got {raw}")
        orders = tuple(int(o) for o in raw)

    compare_laws, compare_x0 = ("corrected", "fixed_time"), x0
    if cp.has_section("compare"):
        cm = cp["compare"]
        compare_laws = (cm.get("predefined_law", "corrected").strip(),
                        cm.get("fixed_law", "fixed_time").strip())
        for key, lid in zip(("predefined_law", "fixed_law"), compare_laws):
            if lid not in LAW_IDS:
                raise ScenarioError(f"[compare] {key}: must be one of {LAW_IDS}, got {lid!r}")
        if "x0" in cm:
            compare_x0 = _numbers("compare", "x0", cm["x0"])
            if not compare_x0:
                raise ScenarioError("[compare] x0: list must not be empty")

    return Scenario(
        name=sc.get("name", "scenario").strip(),
        law_id=law, x0=x0, horizon=horizon, settings=settings, analyses=analyses,
        predef=predef, fixed=fixed, span=span, bound_grid=bound_grid, orders=orders,
        compare_laws=compare_laws, compare_x0=compare_x0,
    )


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}", "parse") from None
    return parse_scenario(text)


# -- output formats ---------------------------------------------------------

def format_float(v) -> str:
    """17 significant digits in scientific notation; lossless and locale-free."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".16e")


def write_trajectory_csv(traj: Trajectory, path):
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("t", "x", "u"))
        for row in zip(traj.t, traj.x, traj.u):
            w.writerow([format_float(v) for v in row])


def read_trajectory_csv(path, law_id, params, *, step=None, t0=None, diverged=False) -> Trajectory:
    """Rebuild a trajectory from a ``t,x,u`` CSV written by this package.

    A final ``(tf, 0, 0)`` row of a predefined-time law is recognized as the
    terminal clamp.
    """
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["t", "x", "u"]:
        raise ValueError(f"{path}: expected header t,x,u")
    data = [[float(v) for v in r] for r in rows[1:]]
    if not data:
        raise ValueError(f"{path}: no samples")
    t, x, u = (list(col) for col in zip(*data))
    clamped = (law_id in PREDEF_LAWS and len(t) > 1
               and t[-1] == params.horizon.tf and x[-1] == 0 and u[-1] == 0)
    if step is None:
        step = t[1] - t[0] if len(t) > 1 else 0.0
    return Trajectory(law_id, params, x[0], t, x, u, step, clamped=clamped,
                      diverged=diverged, t0=t[0] if t0 is None else t0)


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        s = format_float(obj)
        return s if math.isfinite(obj) else json.dumps(s)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    """Deterministic JSON text; floats use ``format_float``, non-finite ones become strings."""
    return _encode(report, 2, 0) + "\n"


def write_report(report: dict, path):
    Path(path).write_text(dumps_report(report), encoding="ascii")
