"""Machine-checkable acceptance criteria with measured tolerances.

Each check runs one numbered criterion end to end, records the measured
values against the pinned thresholds, and reports pass/fail.  The whole
suite is deterministic (seeded sampling, fixed-step integration) and
finishes in a few minutes on a laptop.

Every quantitative threshold is certified against the closed-form
eigen-frame solutions (quadrature oracles), never against the RK4 route
it is checking.
"""

from __future__ import annotations

import json
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import designer, experiments, frame, lz, propagate
from .designer import AddParams, Direction
from .frame import FINE_PATH_STEP, FramePath, uniform_times
from .lz import LZSchedule
from .propagate import IntegratorConfig
from .smallmat import max_abs

RNG_SEED = 20240915


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    detail: str
    measured: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.cid:>2} {self.name}: {self.detail} ({self.elapsed_s:.1f}s)"


def _amplitude_series(s: LZSchedule, traj) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-frame amplitudes (c1, c2) along a recorded state trajectory."""
    ts = traj.times
    th = 0.5 * np.arctan2(s.omega0, s.zeta2 * ts)
    e = np.exp(1j * s.kappa * ts)
    c, sn = np.cos(th), np.sin(th)
    a0, a1 = traj.states[:, 0], traj.states[:, 1]
    return c * e * a0 - sn * a1, sn * a0 + c * e.conj() * a1


def check_eigenstructure() -> CriterionResult:
    """1: closed-form frames solve the eigenproblem and R is unitary."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(RNG_SEED)
    worst_eig = 0.0
    worst_unit = 0.0
    for kappa in (0.0, 5.0):
        s = LZSchedule(kappa=kappa)
        for t in rng.uniform(-1.0, 1.0, size=1000):
            h = lz.h0(s, t)
            fr = frame.build_frame(h, t=t)
            for v, ev in zip(fr.eigvecs, fr.eigvals):
                worst_eig = max(worst_eig, float(np.linalg.norm(h @ v - ev * v)))
            r = fr.rot
            worst_unit = max(worst_unit, max_abs(r.conj().T @ r - np.eye(2)))
    passed = worst_eig <= 1e-10 and worst_unit <= 1e-12
    return CriterionResult(
        1, "eigen-structure", passed,
        f"max eigenpair residual {worst_eig:.2e} (<=1e-10), "
        f"max unitarity defect {worst_unit:.2e} (<=1e-12)",
        {"eig_residual": worst_eig, "unitarity": worst_unit},
        time.perf_counter() - t0,
    )


def check_cd_equivalence() -> CriterionResult:
    """2: finite-difference CD operator matches the closed form and converges."""
    t0 = time.perf_counter()
    s = LZSchedule()

    def max_dev(step: float) -> float:
        times = uniform_times(s.tau, s.tf, step)
        path = FramePath.from_hamiltonian(lambda t: lz.h0(s, t), times)
        worst = 0.0
        for i in range(1, len(path) - 1):
            dev = max_abs(frame.cd_term(path, i) - lz.h_cd(lz.angle(s, times[i])))
            if dev > worst:
                worst = dev
        return worst

    dev_fine = max_dev(FINE_PATH_STEP)
    dev_h = max_dev(1e-3)
    dev_h2 = max_dev(5e-4)
    ratio = dev_h / dev_h2 if dev_h2 > 0 else np.inf
    passed = dev_fine <= 1e-6 and ratio >= 3.0
    return CriterionResult(
        2, "cd-equivalence", passed,
        f"max entrywise deviation {dev_fine:.2e} (<=1e-6) at step {FINE_PATH_STEP:g}, "
        f"halving ratio {ratio:.2f} (>=3)",
        {"deviation": dev_fine, "halving_ratio": ratio, "step": FINE_PATH_STEP},
        time.perf_counter() - t0,
    )


def check_shortcut_invariance() -> CriterionResult:
    """3: eigen-frame magnitudes stay constant; ODE terminal state matches the oracle."""
    t0 = time.perf_counter()
    psi0 = np.array([1.0, 0.0], dtype=complex)
    families = [
        ("alpha=0", LZSchedule(), AddParams()),
        ("alpha=1*theta_dot", LZSchedule(), AddParams(alpha=designer.alpha_theta_dot(1.0))),
        ("alpha=5*theta_dot", LZSchedule(), AddParams(alpha=designer.alpha_theta_dot(5.0))),
        ("transitionless kappa=5", LZSchedule(kappa=5.0),
         AddParams(alpha=designer.alpha_transitionless())),
    ]
    worst_drift = 0.0
    worst_term = 0.0
    for _, s, p in families:
        traj = propagate.evolve_state(s, p, psi0)
        c1, c2 = _amplitude_series(s, traj)
        drift = max(np.max(np.abs(np.abs(c1) - abs(c1[0]))),
                    np.max(np.abs(np.abs(c2) - abs(c2[0]))))
        worst_drift = max(worst_drift, float(drift))
        ref = propagate.oracle_state(s, p, psi0)
        worst_term = max(worst_term, max_abs(traj.final_state() - ref))
    passed = worst_drift <= 1e-6 and worst_term <= 1e-6
    return CriterionResult(
        3, "shortcut-invariance", passed,
        f"max |c_n| drift {worst_drift:.2e} (<=1e-6), "
        f"max terminal component error vs oracle {worst_term:.2e} (<=1e-6)",
        {"magnitude_drift": worst_drift, "terminal_error": worst_term},
        time.perf_counter() - t0,
    )


def check_pulse_family_transfer() -> CriterionResult:
    """4: alpha = alpha0 * theta_dot transfers P2 >= 0.98 for every alpha0, quickly."""
    t0 = time.perf_counter()
    s = LZSchedule()
    psi0 = np.array([1.0, 0.0], dtype=complex)
    p2 = {}
    for a0 in (0.0, 1.0, 2.0, 5.0):
        p = AddParams(alpha=designer.alpha_theta_dot(a0))
        traj = propagate.evolve_state(s, p, psi0)
        p2[a0] = float(traj.populations[-1, 1])
    elapsed = time.perf_counter() - t0
    worst = min(p2.values())
    passed = worst >= 0.98 and elapsed < 10.0
    return CriterionResult(
        4, "pulse-family transfer", passed,
        f"min P2(tf) {worst:.5f} (>=0.98) over alpha0 in {{0,1,2,5}}, runtime {elapsed:.1f}s (<10s)",
        {f"P2_a0_{a0:g}": v for a0, v in p2.items()},
        elapsed,
    )


def check_beta_dropped_transfer() -> CriterionResult:
    """5: with the imaginary off-diagonal dropped, large alpha0 still transfers."""
    t0 = time.perf_counter()
    s = LZSchedule()
    psi0 = np.array([1.0, 0.0], dtype=complex)
    grid = np.round(np.arange(0.0, 10.0 + 1e-9, 0.5), 10)
    p2 = {}
    for a0 in grid:
        p = AddParams(alpha=designer.alpha_theta_dot(float(a0)), force_beta_zero=True)
        traj = propagate.evolve_state(s, p, psi0)
        p2[float(a0)] = float(traj.populations[-1, 1])
    margin = p2[3.0] - p2[1.0]
    tail = {a0: v for a0, v in p2.items() if a0 >= 2.5}
    tail_min = min(tail.values())
    passed = margin > 0.05 and tail_min >= 0.9
    return CriterionResult(
        5, "beta-dropped transfer", passed,
        f"P2(alpha0=3) - P2(alpha0=1) = {margin:.3f} (>0.05), "
        f"min P2 for alpha0>=2.5 is {tail_min:.3f} (>=0.9)",
        {"margin_3_vs_1": margin, "tail_min": tail_min,
         "P2_a0_1": p2[1.0], "P2_a0_3": p2[3.0]},
        time.perf_counter() - t0,
    )


def check_phase_sweep_comparison() -> CriterionResult:
    """6: alpha=0 restrains the drive-phase penalty at least as well as the
    transitionless choice, and the bare sweep fails."""
    t0 = time.perf_counter()
    psi0 = np.array([1.0, 0.0], dtype=complex)
    worst_gap = -np.inf
    worst_bare = 0.0
    for kappa in (0.0, 2.0, 4.0, 6.0, 8.0, 10.0):
        s = LZSchedule(kappa=kappa)
        p2a = float(propagate.evolve_state(
            s, AddParams(alpha=designer.alpha_transitionless()), psi0).populations[-1, 1])
        p2b = float(propagate.evolve_state(s, AddParams(), psi0).populations[-1, 1])
        p2c = float(propagate.evolve_state(s, None, psi0).populations[-1, 1])
        worst_gap = max(worst_gap, p2a - p2b)
        worst_bare = max(worst_bare, p2c)
    passed = worst_gap <= 0.02 and worst_bare < 0.5
    return CriterionResult(
        6, "phase-sweep comparison", passed,
        f"max(P2_transitionless - P2_alpha0) = {worst_gap:.4f} (<=0.02), "
        f"max bare-sweep P2(tf) = {worst_bare:.4f} (<0.5)",
        {"max_gap": worst_gap, "max_bare_P2": worst_bare},
        time.perf_counter() - t0,
    )


def _one_way_run(s: LZSchedule, p: AddParams, protected: int):
    """Evolve the protected eigenstate; return (max suppressed |c|,
    |protected c(tf)|, relative population of the tracked bare state at tf)."""
    psi0 = propagate.initial_eigenstate(s, protected)
    traj = propagate.evolve_state(s, p, psi0)
    c1, c2 = _amplitude_series(s, traj)
    suppressed = c2 if protected == 1 else c1
    kept = c1 if protected == 1 else c2
    rho0 = np.outer(psi0, psi0.conj())
    dens = propagate.evolve_density(s, p, rho0)
    p1, p2 = dens.populations[-1]
    r1, r2 = experiments.relative_populations(p1, p2)
    rel = r1 if protected == 1 else r2
    return float(np.max(np.abs(suppressed))), float(abs(kept[-1])), float(rel)


def check_one_way_suppression() -> CriterionResult:
    """7: gain/loss one-way cancellation protects one eigenstate exactly."""
    t0 = time.perf_counter()
    s = LZSchedule()
    grid_times = np.linspace(s.tau, s.tf, 4001)
    measured: dict[str, float] = {}
    worst_sup = 0.0
    worst_norm = 0.0
    worst_rel = 1.0
    worst_odd = 0.0

    # protected eigenstate 1 runs (constant gamma and the smooth even profile)
    for label, gamma in (("gamma=0.5", 0.5), ("gamma=lorentzian", designer.gamma_lorentzian())):
        p = AddParams(gamma=gamma, direction=Direction.SUPPRESS_INTO_1)
        sup, kept, rel = _one_way_run(s, p, protected=1)
        odd = designer.gamma_odd_check(p, s, grid_times)
        worst_sup = max(worst_sup, sup)
        worst_norm = max(worst_norm, abs(kept - 1.0))
        worst_rel = min(worst_rel, rel)
        worst_odd = max(worst_odd, odd)
        measured[f"{label}_suppressed"] = sup
        measured[f"{label}_P1rel_tf"] = rel

    # gamma grid, protected eigenstate 2 (fast inversion into bare |2>)
    for g0 in np.linspace(0.0, 1.0, 11):
        p = AddParams(gamma=float(g0), direction=Direction.SUPPRESS_INTO_2)
        sup, kept, rel = _one_way_run(s, p, protected=2)
        worst_sup = max(worst_sup, sup)
        worst_norm = max(worst_norm, abs(kept - 1.0))
        worst_rel = min(worst_rel, rel)
        worst_odd = max(worst_odd, designer.gamma_odd_check(p, s, grid_times))
    measured["gamma_grid_min_P2rel"] = worst_rel

    passed = (worst_sup <= 1e-6 and worst_norm <= 1e-3
              and worst_rel >= 0.98 and worst_odd <= 1e-6)
    measured.update({"max_suppressed": worst_sup, "max_norm_defect": worst_norm,
                     "max_odd_integral": worst_odd})
    return CriterionResult(
        7, "one-way suppression", passed,
        f"max suppressed amplitude {worst_sup:.2e} (<=1e-6), "
        f"max |kept(tf)|-1 deviation {worst_norm:.2e} (<=1e-3), "
        f"min relative population {worst_rel:.5f} (>=0.98), "
        f"max odd-integral {worst_odd:.2e} (<=1e-6)",
        measured,
        time.perf_counter() - t0,
    )


def check_beta_zero_via_gamma() -> CriterionResult:
    """8: gamma = theta_dot/sin(2 theta) makes beta vanish exactly and still suppresses.

    The cancellation beta = theta_dot - gamma sin(2 theta) is algebraic;
    numerically the round trip (theta_dot/s2)*s2 leaves one ulp, so the
    exact zero is realized through force_beta_zero (the sanctioned pairing
    for this gamma) while the unforced residual is pinned at roundoff.
    """
    t0 = time.perf_counter()
    s = LZSchedule()
    p = AddParams(gamma=designer.gamma_beta_zero(), direction=Direction.SUPPRESS_INTO_2,
                  force_beta_zero=True)
    p_unforced = AddParams(gamma=designer.gamma_beta_zero(),
                           direction=Direction.SUPPRESS_INTO_2)
    worst_beta = 0.0
    worst_imoff = 0.0
    worst_unforced = 0.0
    for t in np.linspace(s.tau, s.tf, 2001):
        a = lz.angle(s, t)
        solved = designer.solve_add(a, p, t)
        worst_beta = max(worst_beta, abs(solved.beta))
        worst_imoff = max(worst_imoff, abs(solved.h_add[0, 1].imag),
                          abs(solved.h_add[1, 0].imag))
        worst_unforced = max(worst_unforced, abs(designer.solve_add(a, p_unforced, t).beta))
    sup, kept, rel = _one_way_run(s, p, protected=2)
    passed = (worst_beta == 0.0 and worst_imoff == 0.0 and worst_unforced <= 1e-12
              and sup <= 1e-6 and rel >= 0.98)
    return CriterionResult(
        8, "beta-zero via gamma", passed,
        f"max |beta| {worst_beta:.1e} (==0), max |Im offdiag| {worst_imoff:.1e} (==0), "
        f"unforced constraint residual {worst_unforced:.1e} (<=1e-12), "
        f"suppressed amplitude {sup:.2e} (<=1e-6), P2rel(tf) {rel:.5f} (>=0.98)",
        {"max_beta": worst_beta, "max_im_offdiag": worst_imoff,
         "unforced_beta": worst_unforced, "suppressed": sup, "P2rel_tf": rel},
        time.perf_counter() - t0,
    )


def check_integrator_order() -> CriterionResult:
    """9: halving the step shrinks the terminal error by ~16x (4th order)."""
    t0 = time.perf_counter()
    s = LZSchedule()
    p = AddParams()
    psi0 = np.array([1.0, 0.0], dtype=complex)

    def terminal(step: float) -> np.ndarray:
        return propagate.evolve_state(s, p, psi0, IntegratorConfig(step=step)).final_state()

    e_coarse = max_abs(terminal(2e-3) - terminal(5e-4))
    e_half = max_abs(terminal(1e-3) - terminal(2.5e-4))
    ratio = e_coarse / e_half if e_half > 0 else np.inf
    passed = 8.0 <= ratio <= 32.0
    return CriterionResult(
        9, "integrator order", passed,
        f"terminal-error ratio on step halving {ratio:.2f} (in [8, 32])",
        {"ratio": ratio, "err_coarse": e_coarse, "err_half": e_half},
        time.perf_counter() - t0,
    )


def check_determinism() -> CriterionResult:
    """10: two CLI runs of the same figure produce byte-identical CSVs."""
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as tmp:
        paths = []
        for sub in ("a", "b"):
            out = Path(tmp) / sub
            proc = subprocess.run(
                [sys.executable, "-m", "stalab", "figure", "fig1b", "--out", str(out)],
                capture_output=True, text=True,
            )
            if proc.returncode != 0:
                return CriterionResult(
                    10, "determinism", False,
                    f"figure command failed: {proc.stderr.strip()[:200]}",
                    {}, time.perf_counter() - t0,
                )
            paths.append(out / "fig1b.csv")
        blobs = [p.read_bytes() for p in paths]
    identical = blobs[0] == blobs[1]
    return CriterionResult(
        10, "determinism", identical,
        f"fig1b CSVs byte-identical across runs: {identical} ({len(blobs[0])} bytes)",
        {"bytes": len(blobs[0]), "identical": identical},
        time.perf_counter() - t0,
    )


CHECKS_BY_ID = {
    1: check_eigenstructure,
    2: check_cd_equivalence,
    3: check_shortcut_invariance,
    4: check_pulse_family_transfer,
    5: check_beta_dropped_transfer,
    6: check_phase_sweep_comparison,
    7: check_one_way_suppression,
    8: check_beta_zero_via_gamma,
    9: check_integrator_order,
    10: check_determinism,
}


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def run_all(report_path: Path | str | None = None, ids=None) -> list[CriterionResult]:
    """Run the acceptance checks (optionally a subset of ids) and collect results."""
    selected = sorted(CHECKS_BY_ID) if ids is None else sorted(set(ids))
    unknown = [i for i in selected if i not in CHECKS_BY_ID]
    if unknown:
        raise ValueError(f"unknown criterion ids: {unknown}")
    results = [CHECKS_BY_ID[i]() for i in selected]
    if report_path is not None:
        report = {
            "all_passed": all(r.passed for r in results),
            "criteria": [
                {
                    "id": r.cid,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "measured": {k: _jsonable(v) for k, v in r.measured.items()},
                    "elapsed_s": round(r.elapsed_s, 3),
                }
                for r in results
            ],
        }
        Path(report_path).write_text(json.dumps(report, indent=2) + "\n")
    return results
