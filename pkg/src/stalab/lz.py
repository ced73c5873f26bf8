"""Closed-form Landau-Zener two-level model.

The drive keeps a constant Rabi coupling Omega(t) = Omega_0 while the
detuning is swept linearly, Delta(t) = zeta2 * t, optionally with a
linear drive phase phi(t) = kappa * t.  In the interaction picture

    H0(t) = (hbar/2) [[-Delta,          Omega e^{-i phi}],
                      [ Omega e^{+i phi}, Delta         ]].

The mixing angle theta = arctan2(Omega, Delta) / 2 parameterizes the
instantaneous eigenvectors

    |phi_1> = cos(theta) e^{-i phi} |1> - sin(theta) |2>,
    |phi_2> = sin(theta) |1> + cos(theta) e^{+i phi} |2>.

The two-argument arctangent keeps theta on the continuous branch
(0, pi/2) through the avoided crossing at Delta = 0; the naive
arctan(Omega/Delta)/2 jumps there, which would break both the angle
velocity theta_dot and adiabatic-state tracking.  On this branch the
eigenvalue attached to |phi_1> is -(hbar/2) sqrt(Omega^2 + Delta^2),
the one attached to |phi_2> is +(hbar/2) sqrt(Omega^2 + Delta^2).

All frequencies are in units of Omega_0 and times in 1/Omega_0
(hbar = 1 internally).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .smallmat import CMat, CVec, as_cvec
from .units import HBAR


@dataclass(frozen=True)
class LZSchedule:
    """Landau-Zener drive: Omega = omega0, Delta = zeta2 * t, phi = kappa * t.

    The window [tau, tf] is symmetric by default (tau = -tf = -1/Omega_0),
    matching a sweep whose detuning crosses zero in the middle.  With
    omega0 > 0 the mixing angle stays strictly inside (0, pi/2) on any
    finite window, so cot(2 theta) is finite everywhere.
    """

    omega0: float = 1.0
    zeta2: float = 9.0
    kappa: float = 0.0
    tau: float = -1.0
    tf: float = 1.0

    def __post_init__(self) -> None:
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if not self.tau < self.tf:
            raise ValueError(f"need tau < tf, got [{self.tau}, {self.tf}]")

    @property
    def window(self) -> float:
        return self.tf - self.tau

    def omega(self, t: float) -> float:
        return self.omega0

    def delta(self, t: float) -> float:
        return self.zeta2 * t

    def phi(self, t: float) -> float:
        return self.kappa * t


@dataclass(frozen=True)
class AngleState:
    """Mixing angle, drive phase, and their time derivatives at one instant."""

    theta: float
    theta_dot: float
    phi: float
    phi_dot: float


def angle(s: LZSchedule, t: float) -> AngleState:
    """Evaluate the mixing-angle state at time t.

    theta is half the polar angle of the point (Delta, Omega), measured
    from the positive Delta axis, and

        theta_dot = -Omega_0 zeta2 / (2 (Omega_0^2 + zeta2^2 t^2))

    is its closed-form derivative for the linear sweep (the general
    expression (dOmega/dt Delta - Omega dDelta/dt) / (2 (Delta^2 + Omega^2))
    with dOmega/dt = 0).
    """
    delta = s.zeta2 * t
    theta = 0.5 * math.atan2(s.omega0, delta)
    theta_dot = -s.omega0 * s.zeta2 / (2.0 * (s.omega0 * s.omega0 + delta * delta))
    return AngleState(theta=theta, theta_dot=theta_dot, phi=s.kappa * t, phi_dot=s.kappa)


def h0_entries(s: LZSchedule, t: float) -> tuple[complex, complex, complex, complex]:
    """Entries (h00, h01, h10, h11) of H0(t); the scalar path used by the integrator."""
    delta = s.zeta2 * t
    ph = s.kappa * t
    e = complex(math.cos(ph), math.sin(ph))
    half = 0.5 * HBAR
    off = half * s.omega0
    return -half * delta, off * e.conjugate(), off * e, half * delta


def h0(s: LZSchedule, t: float) -> CMat:
    """Bare two-level Hamiltonian H0(t)."""
    h00, h01, h10, h11 = h0_entries(s, t)
    return np.array([[h00, h01], [h10, h11]], dtype=complex)


def energies(s: LZSchedule, t: float) -> tuple[float, float]:
    """Instantaneous eigenvalues (E1, E2) on the continuous-theta branch.

    E1 belongs to |phi_1> and equals -(hbar/2) sqrt(Omega^2 + Delta^2);
    E2 = -E1.
    """
    delta = s.zeta2 * t
    w = math.hypot(s.omega0, delta)
    return -0.5 * HBAR * w, 0.5 * HBAR * w


def eigenstate_1(a: AngleState) -> CVec:
    """|phi_1> = cos(theta) e^{-i phi} |1> - sin(theta) |2>."""
    e = complex(math.cos(a.phi), math.sin(a.phi))
    return np.array([math.cos(a.theta) * e.conjugate(), -math.sin(a.theta)], dtype=complex)


def eigenstate_2(a: AngleState) -> CVec:
    """|phi_2> = sin(theta) |1> + cos(theta) e^{+i phi} |2>."""
    e = complex(math.cos(a.phi), math.sin(a.phi))
    return np.array([math.sin(a.theta), math.cos(a.theta) * e], dtype=complex)


def rotation(a: AngleState) -> tuple[CMat, CMat]:
    """Rotation matrix R (columns are the eigenvectors) and its adjoint.

        R = [[cos(theta) e^{-i phi}, sin(theta)],
             [-sin(theta), cos(theta) e^{+i phi}]]

    R^dagger maps bare amplitudes to eigen-frame amplitudes.
    """
    c, sn = math.cos(a.theta), math.sin(a.theta)
    e = complex(math.cos(a.phi), math.sin(a.phi))
    r = np.array([[c * e.conjugate(), sn], [-sn, c * e]], dtype=complex)
    return r, r.conj().T.copy()


def eigen_amplitudes(a: AngleState, psi: CVec) -> CVec:
    """Eigen-frame amplitudes (c1, c2) = R^dagger psi of a bare-basis state."""
    psi = as_cvec(psi)
    c, sn = math.cos(a.theta), math.sin(a.theta)
    e = complex(math.cos(a.phi), math.sin(a.phi))
    return np.array(
        [c * e * psi[0] - sn * psi[1], sn * psi[0] + c * e.conjugate() * psi[1]],
        dtype=complex,
    )


def nonadiabatic_closed(a: AngleState) -> CMat:
    """Closed form of i hbar R^dagger dR/dt for the two-level rotation.

        hbar [[ phi_dot cos^2(theta),
                (i theta_dot + (phi_dot/2) sin 2theta) e^{+i phi} ],
              [ (-i theta_dot + (phi_dot/2) sin 2theta) e^{-i phi},
                -phi_dot cos^2(theta) ]]

    The diagonal generates the adiabatic phase; the off-diagonal is the
    nonadiabatic coupling that drives transitions between the
    instantaneous eigenstates.
    """
    e = complex(math.cos(a.phi), math.sin(a.phi))
    diag = a.phi_dot * math.cos(a.theta) ** 2
    half_s2 = 0.5 * a.phi_dot * math.sin(2.0 * a.theta)
    return HBAR * np.array(
        [
            [diag, (1j * a.theta_dot + half_s2) * e],
            [(-1j * a.theta_dot + half_s2) * e.conjugate(), -diag],
        ],
        dtype=complex,
    )


def h_cd(a: AngleState) -> CMat:
    """Counterdiabatic Hamiltonian i hbar (dR/dt) R^dagger in closed form.

        hbar [[ phi_dot cos^2(theta),
                (i theta_dot - (phi_dot/2) sin 2theta) e^{-i phi} ],
              [ (-i theta_dot - (phi_dot/2) sin 2theta) e^{+i phi},
                -phi_dot cos^2(theta) ]]

    Adding this to H0 cancels transitions between the instantaneous
    eigenstates exactly (transitionless tracking).  Hermitian by
    construction.
    """
    e = complex(math.cos(a.phi), math.sin(a.phi))
    diag = a.phi_dot * math.cos(a.theta) ** 2
    half_s2 = 0.5 * a.phi_dot * math.sin(2.0 * a.theta)
    return HBAR * np.array(
        [
            [diag, (1j * a.theta_dot - half_s2) * e.conjugate()],
            [(-1j * a.theta_dot - half_s2) * e, -diag],
        ],
        dtype=complex,
    )
