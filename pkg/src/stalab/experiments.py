"""Observables, figure-reproduction sweeps, and CSV emission.

Each figure id maps to one deterministic CSV dataset:

    fig1a   P2 vs time over an alpha0 grid, alpha = alpha0 constant, kappa = 0
    fig1b   same with the pulse family alpha = alpha0 * theta_dot
    fig1c   same pulse family with the imaginary off-diagonal dropped (beta = 0)
    fig2a   P2 vs time over a kappa grid, alpha = -(kappa/2) sin(2 theta)
            (the exact counterdiabatic choice)
    fig2b   same kappa grid with alpha = 0
    fig2c   same kappa grid with no add-on at all (bare sweep)
    fig3    density evolution at gamma = 0.5, protected start in eigenstate 1
    fig4    relative populations over a gamma grid, protected start in
            eigenstate 2 (the fast-inversion direction)
    fig5    density evolution at gamma = 1/(2 + t^2), protected start in
            eigenstate 1
    fig6    imaginary part of the off-diagonal pulse for
            gamma in {0, 0.5, 1/(2+t^2)}

Sweep CSVs (fig1*/fig2*/fig4) carry the columns
    sweep_value,t,P1,P2,P1rel,P2rel,norm
sorted by (sweep_value, t); single-run CSVs (fig3/fig5) drop the sweep
column, and fig6 uses gamma_label,t,im_a12.  Relative populations are
filled only for density (gain/loss) runs and are emitted as empty fields
otherwise.  Floats are written with 12 significant digits; fixed-step
integration and deterministic ordering make re-runs byte-identical.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import designer, lz, propagate
from .designer import AddParams, Direction
from .lz import LZSchedule
from .propagate import IntegratorConfig, PropagationError, Trajectory
from .units import HBAR

FIGURES = ("fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c",
           "fig3", "fig4", "fig5", "fig6")

SWEEP_HEADER = ["sweep_value", "t", "P1", "P2", "P1rel", "P2rel", "norm"]
SINGLE_HEADER = ["t", "P1", "P2", "P1rel", "P2rel", "norm"]
PULSE_HEADER = ["gamma_label", "t", "im_a12"]

#: CSV sampling interval (units 1/Omega_0); propagation runs on the finer
#: integrator step and is subsampled onto this grid.
DEFAULT_CSV_STEP = 1e-3

#: Default sweep axes: 101 points over [0, 10] Omega_0 for alpha0 and
#: kappa, [0, 1] Omega_0 for the gamma grid.
DEFAULT_SWEEP_POINTS = 101
DEFAULT_SWEEP_MAX = 10.0
DEFAULT_GAMMA_MAX = 1.0

FIG3_GAMMA = 0.5
FIG6_SERIES = ("0", "0.5", "1/(2+t^2)")


def populations(state_or_density: np.ndarray) -> tuple[float, float]:
    """(P1, P2) of a state vector (|a_j|^2) or density operator (|rho_jj|)."""
    x = np.asarray(state_or_density, dtype=complex)
    if x.shape == (2,):
        return float(abs(x[0]) ** 2), float(abs(x[1]) ** 2)
    if x.shape == (2, 2):
        return float(abs(x[0, 0])), float(abs(x[1, 1]))
    raise ValueError(f"expected a 2-vector or 2x2 matrix, got shape {x.shape}")


def relative_populations(p1: float, p2: float) -> tuple[float, float]:
    """Normalized pair (P1/(P1+P2), P2/(P1+P2)); undefined when both vanish."""
    total = p1 + p2
    if total <= 1e-12:
        raise ValueError("relative populations undefined: both populations vanish")
    return p1 / total, p2 / total


@dataclass(frozen=True)
class SweepSpec:
    """One figure dataset: parameter grid, drive schedule, output target."""

    figure: str
    grid: np.ndarray
    schedule: LZSchedule = field(default_factory=LZSchedule)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    output_path: Path = Path("figure.csv")
    csv_step: float = DEFAULT_CSV_STEP
    workers: int = 1

    def __post_init__(self) -> None:
        if self.figure not in FIGURES:
            raise ValueError(f"unknown figure {self.figure!r}; expected one of {FIGURES}")
        g = np.asarray(self.grid, dtype=float)
        if g.size == 0:
            raise ValueError("sweep grid must be nonempty")
        if g.size > 1 and not np.all(np.diff(g) > 0):
            raise ValueError("sweep grid must be strictly increasing")
        object.__setattr__(self, "grid", g)


def default_grid(figure: str, points: int = DEFAULT_SWEEP_POINTS) -> np.ndarray:
    """Default sweep axis for a figure id (single-run figures get one point)."""
    if figure in ("fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c"):
        return np.linspace(0.0, DEFAULT_SWEEP_MAX, points)
    if figure == "fig4":
        return np.linspace(0.0, DEFAULT_GAMMA_MAX, points)
    return np.zeros(1)


def _hermitian_point(figure: str, value: float, s: LZSchedule):
    """(schedule, add-params or None) for one Hermitian sweep point."""
    if figure == "fig1a":
        return replace(s, kappa=0.0), AddParams(alpha=value)
    if figure == "fig1b":
        return replace(s, kappa=0.0), AddParams(alpha=designer.alpha_theta_dot(value))
    if figure == "fig1c":
        return replace(s, kappa=0.0), AddParams(
            alpha=designer.alpha_theta_dot(value), force_beta_zero=True
        )
    if figure == "fig2a":
        return replace(s, kappa=value), AddParams(alpha=designer.alpha_transitionless())
    if figure == "fig2b":
        return replace(s, kappa=value), AddParams()
    if figure == "fig2c":
        return replace(s, kappa=value), None
    raise ValueError(f"not a state-vector sweep figure: {figure}")


def _density_params(figure: str, value: float) -> tuple[AddParams, int]:
    """(add-params, protected eigenstate index) for the gain/loss figures."""
    if figure == "fig3":
        return AddParams(gamma=FIG3_GAMMA, direction=Direction.SUPPRESS_INTO_1), 1
    if figure == "fig5":
        return AddParams(gamma=designer.gamma_lorentzian(),
                         direction=Direction.SUPPRESS_INTO_1), 1
    if figure == "fig4":
        return AddParams(gamma=value, direction=Direction.SUPPRESS_INTO_2), 2
    raise ValueError(f"not a density figure: {figure}")


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _subsample(traj: Trajectory, csv_step: float, step: float) -> range:
    stride = max(1, round(csv_step / step))
    return range(0, len(traj.times), stride)


def _state_rows(figure: str, value: float, s: LZSchedule,
                cfg: IntegratorConfig, csv_step: float) -> list[list[str]]:
    sched, params = _hermitian_point(figure, value, s)
    try:
        traj = propagate.evolve_state(sched, params, np.array([1.0, 0.0]), cfg)
    except PropagationError as exc:
        raise PropagationError(f"{figure} sweep_value={value:g}: {exc}") from exc
    rows = []
    for i in _subsample(traj, csv_step, cfg.step):
        p1, p2 = traj.populations[i]
        rows.append([_fmt(value), _fmt(traj.times[i]), _fmt(p1), _fmt(p2),
                     "", "", _fmt(traj.norm[i])])
    return rows


def _density_rows(figure: str, value: float, s: LZSchedule,
                  cfg: IntegratorConfig, csv_step: float,
                  with_sweep_col: bool) -> list[list[str]]:
    sched = replace(s, kappa=0.0)
    params, protected = _density_params(figure, value)
    psi0 = propagate.initial_eigenstate(sched, protected)
    rho0 = np.outer(psi0, psi0.conj())
    try:
        traj = propagate.evolve_density(sched, params, rho0, cfg)
    except PropagationError as exc:
        raise PropagationError(f"{figure} sweep_value={value:g}: {exc}") from exc
    rows = []
    for i in _subsample(traj, csv_step, cfg.step):
        p1, p2 = traj.populations[i]
        try:
            r1, r2 = relative_populations(p1, p2)
            rel = [_fmt(r1), _fmt(r2)]
        except ValueError:
            rel = ["", ""]
        row = [_fmt(traj.times[i]), _fmt(p1), _fmt(p2), *rel, _fmt(traj.norm[i])]
        if with_sweep_col:
            row.insert(0, _fmt(value))
        rows.append(row)
    return rows


def _pulse_rows(s: LZSchedule, csv_step: float) -> list[list[str]]:
    sched = replace(s, kappa=0.0)
    series = {
        "0": AddParams(),
        "0.5": AddParams(gamma=FIG3_GAMMA, direction=Direction.SUPPRESS_INTO_2),
        "1/(2+t^2)": AddParams(gamma=designer.gamma_lorentzian(),
                               direction=Direction.SUPPRESS_INTO_2),
    }
    n = max(2, round(sched.window / csv_step))
    ts = np.linspace(sched.tau, sched.tf, n + 1)
    rows = []
    for label in FIG6_SERIES:
        params = series[label]
        for t in ts:
            a = lz.angle(sched, t)
            _, beta, _, _ = designer.solve_scalars(a, params, t)
            # Im A12 at phi = 0 is hbar * beta.
            rows.append([label, _fmt(t), _fmt(HBAR * beta)])
    return rows


def _sweep_point(args) -> list[list[str]]:
    figure, value, s, cfg, csv_step = args
    if figure == "fig4":
        return _density_rows(figure, value, s, cfg, csv_step, with_sweep_col=True)
    return _state_rows(figure, value, s, cfg, csv_step)


def run_sweep(spec: SweepSpec) -> Path:
    """Run one figure sweep and write its CSV; returns the output path.

    Sweep points are independent and may run in parallel (workers > 1);
    rows are always assembled in grid order so output is deterministic.
    """
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    figure = spec.figure
    if figure in ("fig3", "fig5"):
        header = SINGLE_HEADER
        blocks = [_density_rows(figure, 0.0, spec.schedule, spec.integrator,
                                spec.csv_step, with_sweep_col=False)]
    elif figure == "fig6":
        header = PULSE_HEADER
        blocks = [_pulse_rows(spec.schedule, spec.csv_step)]
    else:
        header = SWEEP_HEADER
        jobs = [(figure, float(v), spec.schedule, spec.integrator, spec.csv_step)
                for v in spec.grid]
        if spec.workers > 1:
            with ProcessPoolExecutor(max_workers=spec.workers) as pool:
                blocks = list(pool.map(_sweep_point, jobs))
        else:
            blocks = [_sweep_point(j) for j in jobs]
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for block in blocks:
            writer.writerows(block)
    return out


def make_spec(
    figure: str,
    out_dir: Path | str = ".",
    schedule: LZSchedule | None = None,
    integrator: IntegratorConfig | None = None,
    grid: np.ndarray | None = None,
    workers: int = 1,
) -> SweepSpec:
    """SweepSpec with the documented defaults for a figure id."""
    return SweepSpec(
        figure=figure,
        grid=default_grid(figure) if grid is None else np.asarray(grid, dtype=float),
        schedule=schedule or LZSchedule(),
        integrator=integrator or IntegratorConfig(),
        output_path=Path(out_dir) / f"{figure}.csv",
        workers=workers,
    )
