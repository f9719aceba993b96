"""
Command-line entry point: run scenario analyses and write CSV/JSON outputs.

    ptcontrol run <scenario>             every analysis listed in the file
    ptcontrol simulate <scenario>        one analysis, whatever the file lists
    ptcontrol peaks | bound-scan | velocity-check | singularity | compare <scenario>

Exit status: 0 on success (a diverged run is a finding, flagged in the
report), 2 for a parse error, 3 for a validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import find_peak, initial_bound_scan, velocity_lower_bound_check
from .derivatives import classify_singularity, min_gain_for_dimension
from .exceptions import InconclusiveError, ScenarioError
from .integrator import PREDEF_LAWS, integrate, solution_error
from .scenario import (
    SCHEMA_VERSION,
    LawConfig,
    Scenario,
    load_scenario,
    write_report,
    write_trajectory_csv,
)

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION = 0, 2, 3
DEFAULT_OUT_DIR = "ptc_out"


def _simulate(cfg: LawConfig):
    if cfg.law_id in PREDEF_LAWS:
        return integrate(cfg.law_id, cfg.params, cfg.x0, cfg.settings)
    return integrate(cfg.law_id, cfg.params, cfg.x0, cfg.settings, span=cfg.span, t0=cfg.t0)


def _peak_dict(traj):
    if traj.diverged:
        return {"diverged": True, "t_peak": None, "u_peak": None, "magnitude": None,
                "location": None}
    pk = find_peak(traj)
    return {"diverged": False, "t_peak": pk.t_peak, "u_peak": pk.u_peak,
            "magnitude": pk.magnitude, "location": pk.location}


def _velocity_dict(traj):
    if traj.diverged:
        return {"diverged": True, "holds": None, "max_speed": None,
                "required": abs(traj.x0) / traj.params.horizon.duration()}
    vc = velocity_lower_bound_check(traj)
    return {"diverged": False, "holds": vc.holds, "max_speed": vc.max_speed,
            "required": vc.required}


def compare_report(predef: LawConfig, fixed: LawConfig) -> dict:
    """Peak location of a predefined-time run next to a fixed-time run.

    Raises
    ------
    ScenarioError
        Unless ``predef`` is a predefined-time law and ``fixed`` the
        fixed-time law.
    """
    if predef.law_id not in PREDEF_LAWS or fixed.law_id != "fixed_time":
        raise ScenarioError(
            f"mismatched kinds: compare needs (original|corrected, fixed_time), "
            f"got ({predef.law_id}, {fixed.law_id})"
        )
    tp, tx = _simulate(predef), _simulate(fixed)
    return {
        "schema_version": SCHEMA_VERSION,
        "predefined": {"law": predef.law_id, "x0": predef.x0, "peak": _peak_dict(tp),
                       "velocity": _velocity_dict(tp)},
        "fixed_time": {"law": fixed.law_id, "x0": fixed.x0, "peak": _peak_dict(tx)},
    }


class _Runner:
    def __init__(self, sc: Scenario, out_dir: Path):
        self.sc = sc
        self.out = out_dir
        self._trajs = {}

    def trajectory(self, i):
        # one CSV per distinct simulated trajectory, written when first computed
        if i not in self._trajs:
            sc = self.sc
            traj = _simulate(sc.law_config(sc.law_id, sc.x0[i]))
            name = f"traj_{sc.law_id}_{i:03d}.csv"
            write_trajectory_csv(traj, self.out / name)
            self._trajs[i] = (traj, name)
        return self._trajs[i]

    def header(self, analysis):
        return {"schema_version": SCHEMA_VERSION, "analysis": analysis,
                "scenario": self.sc.name, "law": self.sc.law_id}

    def simulate(self):
        rows = []
        for i, x0 in enumerate(self.sc.x0):
            traj, name = self.trajectory(i)
            row = {"x0": x0, "file": name, "samples": len(traj), "diverged": traj.diverged,
                   "clamped": traj.clamped, "final_t": float(traj.t[-1]),
                   "final_x": float(traj.x[-1])}
            if traj.is_predefined:
                row["solution_error"] = solution_error(traj, traj.params, traj.law_id)
            rows.append(row)
        return {**self.header("simulate"), "results": rows}

    def peaks(self):
        rows = [{"x0": x0, **_peak_dict(self.trajectory(i)[0])} for i, x0 in enumerate(self.sc.x0)]
        return {**self.header("peaks"), "results": rows}

    def velocity_check(self):
        rows = [{"x0": x0, **_velocity_dict(self.trajectory(i)[0])}
                for i, x0 in enumerate(self.sc.x0)]
        return {**self.header("velocity_check"), "results": rows}

    def bound_scan(self):
        p = self.sc.predef
        rows = [{"x0": r.x0, "u0_original": r.u0_original, "u0_corrected": r.u0_corrected,
                 "bound": r.bound} for r in initial_bound_scan(p, self.sc.bound_grid)]
        return {**self.header("bound_scan"), "eta": p.eta, "results": rows}

    def singularity(self):
        p = self.sc.predef
        rows = []
        for x0 in self.sc.x0:
            for k in self.sc.orders:
                row = {"x0": x0, "order": k, "eta": p.eta,
                       "min_gain_for_dimension": min_gain_for_dimension(k)}
                if x0 == 0:
                    row.update(classification="identically_zero", slope=None)
                else:
                    try:
                        v = classify_singularity(p, x0, k)
                        row.update(classification=v.classification, slope=v.slope)
                    except InconclusiveError as exc:
                        row.update(classification="inconclusive", slope=None, detail=str(exc))
                rows.append(row)
        return {**self.header("singularity"), "results": rows}

    def compare(self):
        sc = self.sc
        pl, fl = sc.compare_laws
        rows = [compare_report(sc.law_config(pl, x0), sc.law_config(fl, x0))
                for x0 in sc.compare_x0]
        return {**self.header("compare"), "results": rows}


def run_scenario(path, out_dir=None, analyses=None, quiet=False) -> int:
    """Run analyses for the scenario at ``path``; returns the exit status.

    ``analyses`` defaults to the list declared in the file. Output goes to
    ``out_dir``, else ``$PTC_OUT_DIR``, else ``./ptc_out``.
    """
    try:
        sc = load_scenario(path)
        todo = tuple(analyses) if analyses else sc.analyses
        if "velocity_check" in todo and sc.law_id not in PREDEF_LAWS:
            raise ScenarioError("velocity_check needs a predefined-time law")
        for a in todo:
            if a in ("bound_scan", "singularity", "compare") and sc.predef is None:
                raise ScenarioError(f"{a} needs a [predefined] section")
            if a == "compare" and sc.fixed is None:
                raise ScenarioError("compare needs a [fixed_time] section")
            if a == "compare" and (sc.compare_laws[0] not in PREDEF_LAWS
                                   or sc.compare_laws[1] != "fixed_time"):
                raise ScenarioError(f"[compare] mismatched kinds {sc.compare_laws}; "
                                    "need (original|corrected, fixed_time)")
        out = Path(out_dir or os.environ.get("PTC_OUT_DIR") or DEFAULT_OUT_DIR)
        out.mkdir(parents=True, exist_ok=True)
        runner = _Runner(sc, out)
        for a in todo:
            report = getattr(runner, a)()
            write_report(report, out / f"{a}.json")
            if not quiet:
                flag = any(r.get("diverged") for r in report.get("results", ()))
                print(f"{a}: wrote {out / (a + '.json')}" + (" (diverged runs flagged)" if flag else ""))
    except ScenarioError as exc:
        print(json.dumps({"error": exc.category, "message": str(exc)}), file=sys.stderr)
        return EXIT_PARSE if exc.category == "parse" else EXIT_VALIDATION
    return EXIT_OK


_SUBCOMMANDS = {
    "simulate": "simulate",
    "peaks": "peaks",
    "bound-scan": "bound_scan",
    "velocity-check": "velocity_check",
    "singularity": "singularity",
    "compare": "compare",
}


def build_parser():
    parser = argparse.ArgumentParser(prog="ptcontrol", description=__doc__.splitlines()[1])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", help="output directory (default: $PTC_OUT_DIR or ./ptc_out)")
    common.add_argument("--quiet", action="store_true", help="print nothing on success")
    common.add_argument("scenario", help="scenario file")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run every analysis the scenario lists")
    for cmd in _SUBCOMMANDS:
        sub.add_parser(cmd, parents=[common], help=f"run only the {cmd} analysis")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    analyses = None if args.command == "run" else (_SUBCOMMANDS[args.command],)
    return run_scenario(args.scenario, args.out_dir, analyses, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
