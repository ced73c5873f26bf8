"""Time evolution of the driven two-level system, plus closed-form oracles.

State vectors evolve under i hbar d psi/dt = (H0 + H_add) psi with a
fixed-step classical 4th-order Runge-Kutta scheme; density operators
evolve under

    d rho/dt = (1/i hbar) (H rho - rho H^dagger),

which reduces to the von Neumann equation for Hermitian H and preserves
Hermiticity of rho in general.  Fixed stepping keeps runs byte-for-byte
reproducible; accuracy is certified by an order check (halving the step
shrinks the terminal error ~16x) rather than by adaptive control.

The oracles integrate the eigen-frame phases by quadrature instead of
solving the ODE, so they are independent references for the propagator:
when the add-on cancels both transition directions the eigen-frame
amplitudes keep their magnitudes and only rotate,

    c_n(t) = c_n(tau) exp(-i Phi_n(t)),
    Phi_1 = int E_1/hbar + chi dt',   Phi_2 = int E_2/hbar - chi dt',
    chi = eta cos(2 theta) - alpha sin(2 theta) - phi_dot cos^2(theta),

and the bare-basis state is reassembled through the rotation at tf.
With gain/loss (gamma != 0) only the protected eigenstate obeys a
closed form; chi acquires the imaginary part i gamma cos(2 theta) whose
integral controls the norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import designer, lz
from .designer import AddParams, Direction
from .lz import LZSchedule
from .smallmat import CMat, CVec, as_cmat, as_cvec, max_abs
from .units import HBAR

_NAN_CHECK_STRIDE = 200


class PropagationError(RuntimeError):
    """Raised when the integration blows up (non-finite state detected)."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    The step must resolve the window (at most window/100); convergence
    checks compare halved-step runs against the tolerance target.
    """

    step: float = 1e-4
    method: str = "rk4"
    tolerance: float = 1e-8

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.method != "rk4":
            raise ValueError(f"only the fixed-step rk4 method is available, got {self.method!r}")

    def grid(self, s: LZSchedule) -> tuple[int, float]:
        """Number of steps and the exact spacing that tiles [tau, tf]."""
        if self.step > s.window / 100.0:
            raise ValueError(
                f"step {self.step} too coarse for window {s.window} (need <= window/100)"
            )
        n = max(100, round(s.window / self.step))
        return n, s.window / n


@dataclass
class Trajectory:
    """Recorded time series of a single evolution.

    states has shape (n, 2) for state vectors or (n, 2, 2) for density
    operators; populations holds (P1, P2) per sample and norm their sum.
    For state vectors P_j = |a_j|^2; for densities P_j = |rho_jj|, which
    is not conserved under gain/loss.
    """

    times: np.ndarray
    states: np.ndarray
    populations: np.ndarray
    norm: np.ndarray

    @property
    def is_density(self) -> bool:
        return self.states.ndim == 3

    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _h_entries(s: LZSchedule, p: AddParams | None, t: float):
    h00, h01, h10, h11 = lz.h0_entries(s, t)
    if p is None:
        return h00, h01, h10, h11
    a00, a01, a10, a11 = designer.h_add_entries(lz.angle(s, t), p, t)
    return h00 + a00, h01 + a01, h10 + a10, h11 + a11


def _check_finite(vals, t: float) -> None:
    for v in vals:
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise PropagationError(f"state became non-finite near t={t:.6g}")


def evolve_state(
    s: LZSchedule,
    p: AddParams | None,
    psi0: CVec,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Propagate a state vector under H0 + H_add over [tau, tf].

    p=None propagates the bare sweep.  The state is recorded at every
    integrator step.  For Hermitian add-ons the norm is conserved to
    integrator accuracy; with gain/loss it is free to decay or grow.
    """
    cfg = cfg or IntegratorConfig()
    psi0 = as_cvec(psi0)
    if psi0.shape != (2,):
        raise ValueError("the driven model is two-level; psi0 must have dimension 2")
    n, h = cfg.grid(s)
    inv_ih = -1j / HBAR
    y0, y1 = complex(psi0[0]), complex(psi0[1])
    states = np.empty((n + 1, 2), dtype=complex)
    states[0] = (y0, y1)
    half = 0.5 * h
    sixth = h / 6.0
    for k in range(n):
        t = s.tau + k * h
        a00, a01, a10, a11 = _h_entries(s, p, t)
        b00, b01, b10, b11 = _h_entries(s, p, t + half)
        c00, c01, c10, c11 = _h_entries(s, p, t + h)
        k1a = inv_ih * (a00 * y0 + a01 * y1)
        k1b = inv_ih * (a10 * y0 + a11 * y1)
        ua, ub = y0 + half * k1a, y1 + half * k1b
        k2a = inv_ih * (b00 * ua + b01 * ub)
        k2b = inv_ih * (b10 * ua + b11 * ub)
        ua, ub = y0 + half * k2a, y1 + half * k2b
        k3a = inv_ih * (b00 * ua + b01 * ub)
        k3b = inv_ih * (b10 * ua + b11 * ub)
        ua, ub = y0 + h * k3a, y1 + h * k3b
        k4a = inv_ih * (c00 * ua + c01 * ub)
        k4b = inv_ih * (c10 * ua + c11 * ub)
        y0 += sixth * (k1a + 2.0 * (k2a + k3a) + k4a)
        y1 += sixth * (k1b + 2.0 * (k2b + k3b) + k4b)
        states[k + 1] = (y0, y1)
        if k % _NAN_CHECK_STRIDE == 0:
            _check_finite((y0, y1), t)
    _check_finite((y0, y1), s.tf)
    times = s.tau + np.arange(n + 1) * h
    populations = np.abs(states) ** 2
    return Trajectory(times=times, states=states, populations=populations,
                      norm=populations.sum(axis=1))


def evolve_density(
    s: LZSchedule,
    p: AddParams | None,
    rho0: CMat,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Propagate a density operator under d rho/dt = (H rho - rho H^dagger)/(i hbar).

    rho0 must be Hermitian, positive semidefinite, and unit trace.  The
    recorded populations are P_j = |rho_jj|; their sum (the norm) is not
    conserved when gamma != 0 but returns to 1 at tf whenever the
    gain/loss exponent integrates to zero over the window.
    """
    cfg = cfg or IntegratorConfig()
    rho0 = as_cmat(rho0)
    if rho0.shape != (2, 2):
        raise ValueError("the driven model is two-level; rho0 must be 2x2")
    if max_abs(rho0 - rho0.conj().T) > 1e-9:
        raise ValueError("rho0 must be Hermitian")
    if abs(np.trace(rho0) - 1.0) > 1e-9:
        raise ValueError("rho0 must have unit trace")
    if np.linalg.eigvalsh(rho0).min() < -1e-9:
        raise ValueError("rho0 must be positive semidefinite")
    n, h = cfg.grid(s)
    inv_ih = -1j / HBAR
    r00, r01, r10, r11 = (complex(rho0[0, 0]), complex(rho0[0, 1]),
                          complex(rho0[1, 0]), complex(rho0[1, 1]))
    states = np.empty((n + 1, 2, 2), dtype=complex)
    states[0] = ((r00, r01), (r10, r11))
    half = 0.5 * h
    sixth = h / 6.0

    def rhs(hh, q00, q01, q10, q11):
        h00, h01, h10, h11 = hh
        g00, g01 = h00.conjugate(), h10.conjugate()  # rows of H^dagger
        g10, g11 = h01.conjugate(), h11.conjugate()
        return (
            inv_ih * (h00 * q00 + h01 * q10 - (q00 * g00 + q01 * g10)),
            inv_ih * (h00 * q01 + h01 * q11 - (q00 * g01 + q01 * g11)),
            inv_ih * (h10 * q00 + h11 * q10 - (q10 * g00 + q11 * g10)),
            inv_ih * (h10 * q01 + h11 * q11 - (q10 * g01 + q11 * g11)),
        )

    for k in range(n):
        t = s.tau + k * h
        ha = _h_entries(s, p, t)
        hb = _h_entries(s, p, t + half)
        hc = _h_entries(s, p, t + h)
        k1 = rhs(ha, r00, r01, r10, r11)
        k2 = rhs(hb, r00 + half * k1[0], r01 + half * k1[1],
                 r10 + half * k1[2], r11 + half * k1[3])
        k3 = rhs(hb, r00 + half * k2[0], r01 + half * k2[1],
                 r10 + half * k2[2], r11 + half * k2[3])
        k4 = rhs(hc, r00 + h * k3[0], r01 + h * k3[1],
                 r10 + h * k3[2], r11 + h * k3[3])
        r00 += sixth * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
        r01 += sixth * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
        r10 += sixth * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
        r11 += sixth * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3])
        states[k + 1] = ((r00, r01), (r10, r11))
        if k % _NAN_CHECK_STRIDE == 0:
            _check_finite((r00, r01, r10, r11), t)
    _check_finite((r00, r01, r10, r11), s.tf)
    times = s.tau + np.arange(n + 1) * h
    populations = np.abs(states[:, (0, 1), (0, 1)])
    return Trajectory(times=times, states=states, populations=populations,
                      norm=populations.sum(axis=1))


def initial_eigenstate(s: LZSchedule, which: int) -> CVec:
    """Instantaneous eigenstate |phi_which(tau)>, built analytically.

    Constructed from theta(tau) and phi(tau) rather than by numerical
    diagonalization, so the gauge matches the closed-form amplitudes
    with no phase ambiguity.
    """
    a = lz.angle(s, s.tau)
    if which == 1:
        return lz.eigenstate_1(a)
    if which == 2:
        return lz.eigenstate_2(a)
    raise ValueError(f"which must be 1 or 2, got {which}")


def _quad_grid(t0: float, t1: float, quad_step: float) -> np.ndarray:
    n = max(10, round((t1 - t0) / quad_step))
    return np.linspace(t0, t1, n + 1)


def _design_arrays(s: LZSchedule, p: AddParams, ts: np.ndarray):
    """(alpha, beta, eta, gamma) sampled on ts via the scalar constraint solver."""
    al = np.empty(len(ts))
    be = np.empty(len(ts))
    et = np.empty(len(ts))
    ga = np.empty(len(ts))
    for i, t in enumerate(ts):
        a = lz.angle(s, t)
        al[i], be[i], et[i], ga[i] = designer.solve_scalars(a, p, t)
    return al, be, et, ga


def oracle_phase_integrals(
    s: LZSchedule, p: AddParams, quad_step: float = 1e-5
) -> tuple[float, float]:
    """Eigen-frame phases (Phi_1, Phi_2) accumulated from tau to tf.

    Phi_1 = int E_1/hbar + chi dt', Phi_2 = int E_2/hbar - chi dt', by
    composite trapezoid with spacing <= quad_step.  Hermitian add-ons
    only (gamma must vanish identically).
    """
    ts = _quad_grid(s.tau, s.tf, quad_step)
    al, _, et, ga = _design_arrays(s, p, ts)
    if np.max(np.abs(ga)) > 0.0:
        raise ValueError("closed-form phase evolution requires gamma == 0")
    th = 0.5 * np.arctan2(s.omega0, s.zeta2 * ts)
    chi = et * np.cos(2 * th) - al * np.sin(2 * th) - s.kappa * np.cos(th) ** 2
    w = np.hypot(s.omega0, s.zeta2 * ts)
    e1 = -0.5 * w
    phi1 = float(np.trapezoid(e1 / HBAR + chi, ts))
    phi2 = float(np.trapezoid(-e1 / HBAR - chi, ts))
    return phi1, phi2


def oracle_state(
    s: LZSchedule, p: AddParams, psi0: CVec, quad_step: float = 1e-5
) -> CVec:
    """Closed-form final state at tf for a Hermitian add-on.

    Projects psi0 onto the eigenbasis at tau, advances the two
    amplitudes by the quadrature phases, and reassembles the bare-basis
    state through the rotation at tf.  Independent of the RK4 route.
    """
    psi0 = as_cvec(psi0)
    if psi0.shape != (2,):
        raise ValueError("psi0 must have dimension 2")
    phi1, phi2 = oracle_phase_integrals(s, p, quad_step)
    a_tau = lz.angle(s, s.tau)
    c1, c2 = lz.eigen_amplitudes(a_tau, psi0)
    c1f = c1 * np.exp(-1j * phi1)
    c2f = c2 * np.exp(-1j * phi2)
    a_tf = lz.angle(s, s.tf)
    return c1f * lz.eigenstate_1(a_tf) + c2f * lz.eigenstate_2(a_tf)


def oracle_nonhermitian(
    s: LZSchedule, p: AddParams, t: float, quad_step: float = 1e-5
) -> complex:
    """Closed-form protected-eigenstate amplitude at time t for gamma != 0.

    One-way cancellation protects exactly one eigenstate: starting in
    |phi_2(tau)> with SUPPRESS_INTO_2 (or |phi_1(tau)> with
    SUPPRESS_INTO_1), the other amplitude stays identically zero and the
    protected one evolves as a single exponential whose real part is
    -+ int gamma cos(2 theta) dt'.  Returns that amplitude; its
    magnitude returns to 1 at tf whenever gamma cos(2 theta) integrates
    to zero over the window.
    """
    if p.direction is Direction.SUPPRESS_BOTH:
        raise ValueError("one-way evolution requires SUPPRESS_INTO_1 or SUPPRESS_INTO_2")
    if not s.tau <= t <= s.tf:
        raise ValueError(f"t={t} outside the window [{s.tau}, {s.tf}]")
    ts = _quad_grid(s.tau, t, quad_step)
    al, _, et, ga = _design_arrays(s, p, ts)
    th = 0.5 * np.arctan2(s.omega0, s.zeta2 * ts)
    chi = (et + 1j * ga) * np.cos(2 * th) - al * np.sin(2 * th) - s.kappa * np.cos(th) ** 2
    w = np.hypot(s.omega0, s.zeta2 * ts)
    if p.direction is Direction.SUPPRESS_INTO_1:
        integrand = -0.5 * w / HBAR + chi
    else:
        integrand = +0.5 * w / HBAR - chi
    return complex(np.exp(-1j * np.trapezoid(integrand, ts)))
