"""Command-line interface.

    stalab figure <id> [--out DIR] [--tf X] [--zeta2 X] [--grid a:b:n] [--workers N]
    stalab simulate --config run.json
    stalab verify [--report out.json] [--only 1,2,...]

`figure` writes one deterministic CSV per figure id (fig1a .. fig6),
`simulate` runs a single trajectory described by a JSON config, and
`verify` runs the acceptance suite, printing one pass/fail line per
criterion with the measured tolerances.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import designer, experiments, propagate, verify
from .designer import AddParams, Direction
from .experiments import make_spec, relative_populations, run_sweep
from .lz import LZSchedule
from .propagate import IntegratorConfig


def _parse_grid(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        return np.linspace(float(a), float(b), int(n))
    except ValueError as exc:
        raise SystemExit(f"bad --grid {text!r}; expected a:b:n") from exc


def _reject_unknown(section: str, data: dict, allowed: set[str]) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise SystemExit(f"unknown keys in {section}: {sorted(unknown)}")


def _schedule_from(data: dict) -> LZSchedule:
    names = {f.name for f in fields(LZSchedule)}
    _reject_unknown("schedule", data, names)
    return LZSchedule(**data)


def _integrator_from(data: dict) -> IntegratorConfig:
    names = {f.name for f in fields(IntegratorConfig)}
    _reject_unknown("integrator", data, names)
    return IntegratorConfig(**data)


_ALPHA_MODES = {
    "constant": lambda v: float(v.get("value", 0.0)),
    "theta_dot": lambda v: designer.alpha_theta_dot(float(v.get("value", 0.0))),
    "transitionless": lambda v: designer.alpha_transitionless(),
}
_GAMMA_MODES = {
    "constant": lambda v: float(v.get("value", 0.0)),
    "lorentzian": lambda v: designer.gamma_lorentzian(float(v.get("width2", 2.0))),
    "beta_zero": lambda v: designer.gamma_beta_zero(),
}


def _design_fn(section: str, value, modes):
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, dict):
        _reject_unknown(section, value, {"mode", "value", "width2"})
        mode = value.get("mode")
        if mode not in modes:
            raise SystemExit(f"{section}: unknown mode {mode!r}; expected {sorted(modes)}")
        return modes[mode](value)
    raise SystemExit(f"{section}: expected a number or a mode object")


def _add_params_from(data: dict | None) -> AddParams | None:
    if data is None:
        return None
    _reject_unknown("add", data, {"alpha", "gamma", "direction", "force_beta_zero"})
    direction = Direction(data.get("direction", "both"))
    return AddParams(
        alpha=_design_fn("add.alpha", data.get("alpha", 0.0), _ALPHA_MODES),
        gamma=_design_fn("add.gamma", data.get("gamma", 0.0), _GAMMA_MODES),
        direction=direction,
        force_beta_zero=bool(data.get("force_beta_zero", False)),
    )


_INITIAL_STATES = ("bare1", "bare2", "eigen1", "eigen2")


def _initial_state(s: LZSchedule, name: str) -> np.ndarray:
    if name == "bare1":
        return np.array([1.0, 0.0], dtype=complex)
    if name == "bare2":
        return np.array([0.0, 1.0], dtype=complex)
    if name == "eigen1":
        return propagate.initial_eigenstate(s, 1)
    if name == "eigen2":
        return propagate.initial_eigenstate(s, 2)
    raise SystemExit(f"unknown initial_state {name!r}; expected one of {_INITIAL_STATES}")


def cmd_simulate(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.config).read_text())
    _reject_unknown("config", data, {
        "schedule", "add", "integrator", "initial_state", "evolution", "output", "csv_step",
    })
    s = _schedule_from(data.get("schedule", {}))
    cfg = _integrator_from(data.get("integrator", {}))
    params = _add_params_from(data.get("add"))
    evolution = data.get("evolution", "state")
    psi0 = _initial_state(s, data.get("initial_state", "bare1"))
    if evolution == "state":
        traj = propagate.evolve_state(s, params, psi0, cfg)
    elif evolution == "density":
        traj = propagate.evolve_density(s, params, np.outer(psi0, psi0.conj()), cfg)
    else:
        raise SystemExit(f"evolution must be 'state' or 'density', got {evolution!r}")
    out = Path(data.get("output", "trajectory.csv"))
    csv_step = float(data.get("csv_step", experiments.DEFAULT_CSV_STEP))
    stride = max(1, round(csv_step / cfg.step))
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(experiments.SINGLE_HEADER)
        for i in range(0, len(traj.times), stride):
            p1, p2 = traj.populations[i]
            if evolution == "density":
                r1, r2 = relative_populations(p1, p2)
                rel = [format(r1, ".12g"), format(r2, ".12g")]
            else:
                rel = ["", ""]
            writer.writerow([format(traj.times[i], ".12g"), format(p1, ".12g"),
                             format(p2, ".12g"), *rel, format(traj.norm[i], ".12g")])
    print(out)
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    schedule = LZSchedule(zeta2=args.zeta2, tau=-args.tf, tf=args.tf)
    spec = make_spec(
        args.figure,
        out_dir=args.out,
        schedule=schedule,
        grid=_parse_grid(args.grid) if args.grid else None,
        workers=args.workers,
    )
    path = run_sweep(spec)
    print(path)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    ids = None
    if args.only:
        ids = [int(x) for x in args.only.split(",")]
    results = verify.run_all(report_path=args.report, ids=ids)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("all criteria passed" if ok else "SOME CRITERIA FAILED")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stalab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a single trajectory from a JSON config")
    p_sim.add_argument("--config", required=True, help="JSON run description")
    p_sim.set_defaults(func=cmd_simulate)

    p_fig = sub.add_parser("figure", help="write one figure-reproduction CSV")
    p_fig.add_argument("figure", choices=experiments.FIGURES)
    p_fig.add_argument("--out", default=".", help="output directory")
    p_fig.add_argument("--tf", type=float, default=1.0,
                       help="final time (window is [-tf, tf], units 1/Omega0)")
    p_fig.add_argument("--zeta2", type=float, default=9.0,
                       help="sweep rate zeta^2 (units Omega0^2)")
    p_fig.add_argument("--grid", default=None, help="sweep axis a:b:n")
    p_fig.add_argument("--workers", type=int, default=1, help="parallel sweep points")
    p_fig.set_defaults(func=cmd_figure)

    p_ver = sub.add_parser("verify", help="run the acceptance suite")
    p_ver.add_argument("--report", default=None, help="write a JSON report here")
    p_ver.add_argument("--only", default=None, help="comma-separated criterion ids")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
