"""Instantaneous eigen-frame machinery for N-level Hamiltonians.

A Frame holds the orthonormal instantaneous eigenbasis {|phi_n(t)>} of a
Hamiltonian at one time sample together with the rotation R(t) whose
columns are the eigenvectors; R^dagger(t) maps bare amplitudes into the
eigen frame.  A FramePath strings frames along a time grid with a
continuous gauge so that dR/dt can be taken by central finite
differences, giving

    nonadiabatic term   i hbar R^dagger dR/dt   (eigen frame)
    cd term             i hbar (dR/dt) R^dagger (bare frame)

and the nullification residual, which measures how well a candidate
add-on Hamiltonian H_add reproduces selected off-diagonal entries of
i hbar R^dagger dR/dt after the frame change R^dagger H_add R.  A zero
residual on a pair (n, m) means the eigen-frame Hamiltonian has a zero
(n, m) entry, i.e. amplitude can no longer flow from eigenstate m to
eigenstate n.

Eigenvalues are always recomputed as Rayleigh quotients <phi_n|H|phi_n>
instead of trusting a labeling convention: on the continuous mixing-angle
branch the eigenvector written with cos(theta) first carries the LOWER
eigenvalue, and the eigenpair residual test is the arbiter.

For dimension 2 a closed-form eigensolver with a fixed analytic gauge is
built in; larger dimensions require a caller-supplied eigensolver, and
the gauge is then fixed by aligning each eigenvector with its
predecessor along the path (positive real overlap).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .smallmat import CMat, CVec, as_cmat, max_abs
from .units import HBAR

# Default grid spacing (units 1/Omega_0) for finite-difference paths.
# The central-difference error scales with the square of this spacing;
# checks against closed forms at 1e-6 tolerance need a finer grid
# (see FINE_PATH_STEP).
DEFAULT_PATH_STEP = 1e-3

# Spacing at which the second-order stencil error for the default
# Landau-Zener parameters drops to ~5e-8, comfortably inside 1e-6.
FINE_PATH_STEP = 2e-5

Eigensolver = Callable[[CMat], Sequence[CVec]]

ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class Frame:
    """Eigenbasis snapshot: time, eigenvectors, eigenvalues, and R^dagger.

    rot_adj rows are the conjugated eigenvectors, row m = <phi_m|, so
    rot_adj @ psi gives the eigen-frame amplitudes.
    """

    t: float
    eigvecs: tuple[CVec, ...]
    eigvals: np.ndarray
    rot_adj: CMat

    @property
    def dim(self) -> int:
        return self.rot_adj.shape[0]

    @property
    def rot(self) -> CMat:
        """Rotation matrix R; columns are the eigenvectors."""
        return self.rot_adj.conj().T.copy()


def two_level_eigenbasis(h: CMat) -> list[CVec]:
    """Closed-form orthonormal eigenbasis of a Hermitian 2x2 matrix.

    Decomposes H into trace and traceless parts, reads off the detuning
    Delta = H11 - H00, coupling Omega e^{+i phi} = 2 H10, and returns the
    analytic-gauge pair

        [cos(theta) e^{-i phi}, -sin(theta)],  [sin(theta), cos(theta) e^{+i phi}]

    with theta = arctan2(Omega, Delta) / 2.
    """
    h = as_cmat(h)
    if h.shape[0] != 2:
        raise ValueError(f"closed-form solver is two-level only, got dim {h.shape[0]}")
    if max_abs(h - h.conj().T) > 1e-9:
        raise ValueError("closed-form solver expects a Hermitian matrix")
    delta = (h[1, 1] - h[0, 0]).real
    off = complex(h[1, 0])
    omega = 2.0 * abs(off)
    phase = cmath.phase(off) if omega > 0 else 0.0
    theta = 0.5 * math.atan2(omega, delta)
    c, s = math.cos(theta), math.sin(theta)
    e = cmath.exp(1j * phase)
    v1 = np.array([c * e.conjugate(), -s], dtype=complex)
    v2 = np.array([s, c * e], dtype=complex)
    return [v1, v2]


def build_frame(
    h: CMat,
    eigensolver: Eigensolver | None = None,
    t: float = 0.0,
    ortho_tol: float = ORTHO_TOL,
) -> Frame:
    """Assemble a Frame from a Hamiltonian and an eigenbasis provider.

    For dim 2 the built-in closed form is used when no eigensolver is
    given; dim > 2 requires one.  The provided basis must be orthonormal
    within ortho_tol (max-entry residual of V^dagger V - I), otherwise a
    ValueError is raised.  Eigenvalues are the Rayleigh quotients
    <phi_n|H|phi_n>.
    """
    h = as_cmat(h)
    dim = h.shape[0]
    if eigensolver is None:
        if dim != 2:
            raise ValueError("an eigensolver must be supplied for dim > 2")
        vecs = two_level_eigenbasis(h)
    else:
        vecs = [np.asarray(v, dtype=complex) for v in eigensolver(h)]
    if len(vecs) != dim or any(v.shape != (dim,) for v in vecs):
        raise ValueError(f"eigensolver must return {dim} vectors of dimension {dim}")
    vmat = np.column_stack(vecs)
    gram_residual = max_abs(vmat.conj().T @ vmat - np.eye(dim))
    if gram_residual > ortho_tol:
        raise ValueError(
            f"eigensolver basis is not orthonormal: residual {gram_residual:.3e} > {ortho_tol:.1e}"
        )
    eigvals = np.array([np.vdot(v, h @ v).real for v in vecs])
    rot_adj = vmat.conj().T.copy()
    return Frame(t=float(t), eigvecs=tuple(vecs), eigvals=eigvals, rot_adj=rot_adj)


def to_eigen_picture(frame: Frame, psi: CVec) -> CVec:
    """Eigen-frame amplitudes R^dagger psi of a bare-basis state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (frame.dim,):
        raise ValueError(f"dimension mismatch: state {psi.shape} vs frame dim {frame.dim}")
    return frame.rot_adj @ psi


class FramePath:
    """Frames along a strictly increasing time grid with a continuous gauge.

    Stores the stacked rotation adjoints and eigenvalues; individual
    Frame views are materialized on demand via frame(i).
    """

    def __init__(self, times: np.ndarray, rot_adj: np.ndarray, eigvals: np.ndarray):
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or len(times) < 3:
            raise ValueError("a path needs at least 3 time samples")
        if not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        self._times = times
        self._rot_adj = np.asarray(rot_adj, dtype=complex)
        self._eigvals = np.asarray(eigvals, dtype=float)

    @classmethod
    def from_hamiltonian(
        cls,
        h_of_t: Callable[[float], CMat],
        times: np.ndarray,
        eigensolver: Eigensolver | None = None,
    ) -> "FramePath":
        """Build frames at each grid time and fix the gauge along the path.

        With the built-in two-level solver the analytic gauge is already
        continuous and is kept as is (so finite differences reproduce the
        closed-form adiabatic-phase diagonal).  A caller-supplied basis
        is re-phased sample to sample for positive real overlap
        <phi_n(t_i)|phi_n(t_i+1)> > 0; failure of that condition means
        the grid is too coarse to track the band and raises.
        """
        times = np.asarray(times, dtype=float)
        frames0 = build_frame(h_of_t(times[0]), eigensolver, t=times[0])
        dim = frames0.dim
        n = len(times)
        rot_adj = np.empty((n, dim, dim), dtype=complex)
        eigvals = np.empty((n, dim), dtype=float)
        rot_adj[0] = frames0.rot_adj
        eigvals[0] = frames0.eigvals
        align = eigensolver is not None
        prev = np.array(frames0.eigvecs)  # rows are eigenvectors
        for i in range(1, n):
            fr = build_frame(h_of_t(times[i]), eigensolver, t=times[i])
            cur = np.array(fr.eigvecs)
            overlaps = np.einsum("nk,nk->n", prev.conj(), cur)
            if align:
                mags = np.abs(overlaps)
                if np.any(mags < 1e-12):
                    raise ValueError(
                        f"phase alignment failed at t={times[i]}: vanishing band overlap"
                    )
                cur = cur * (overlaps.conj() / mags)[:, None]
                overlaps = mags
            if np.any(np.real(overlaps) <= 0):
                raise ValueError(
                    f"eigenvector continuity lost at t={times[i]}: grid too coarse"
                )
            rot_adj[i] = cur.conj()
            eigvals[i] = fr.eigvals
            prev = cur
        return cls(times, rot_adj, eigvals)

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def dim(self) -> int:
        return self._rot_adj.shape[1]

    def __len__(self) -> int:
        return len(self._times)

    def frame(self, i: int) -> Frame:
        ra = self._rot_adj[i]
        vecs = tuple(ra[m].conj().copy() for m in range(self.dim))
        return Frame(t=float(self._times[i]), eigvecs=vecs, eigvals=self._eigvals[i].copy(),
                     rot_adj=ra.copy())

    @property
    def frames(self) -> list[Frame]:
        return [self.frame(i) for i in range(len(self))]

    def _rot(self, i: int) -> CMat:
        return self._rot_adj[i].conj().T

    def _rdot(self, i: int) -> CMat:
        if not 0 < i < len(self) - 1:
            raise IndexError(f"central difference needs an interior index, got {i}")
        dt = self._times[i + 1] - self._times[i - 1]
        return (self._rot(i + 1) - self._rot(i - 1)) / dt


def uniform_times(t0: float, t1: float, step: float) -> np.ndarray:
    """Uniform grid over [t0, t1] with spacing as close to step as divides evenly."""
    if step <= 0 or t1 <= t0:
        raise ValueError("need step > 0 and t1 > t0")
    n = max(2, round((t1 - t0) / step))
    return np.linspace(t0, t1, n + 1)


def nonadiabatic_term(path: FramePath, i: int) -> CMat:
    """Full eigen-frame matrix i hbar R^dagger dR/dt at grid index i.

    dR/dt is a central difference on the gauge-continuous path.  The
    diagonal is the adiabatic-phase generator; the off-diagonal entries
    i hbar <phi_n | d/dt phi_m> are the nonadiabatic couplings.
    """
    return 1j * HBAR * (path._rot_adj[i] @ path._rdot(i))


def cd_term(path: FramePath, i: int) -> CMat:
    """Counterdiabatic operator i hbar (dR/dt) R^dagger at grid index i.

    Equals R (i hbar R^dagger dR/dt) R^dagger up to finite-difference
    error; Hermitian within that error for a Hermitian Hamiltonian.
    """
    return 1j * HBAR * (path._rdot(i) @ path._rot_adj[i])


def transformed_add(frame: Frame, h_add: CMat) -> CMat:
    """Change of basis R^dagger H_add R into the instantaneous eigenbasis."""
    h_add = as_cmat(h_add)
    if h_add.shape[0] != frame.dim:
        raise ValueError(f"dimension mismatch: {h_add.shape} vs frame dim {frame.dim}")
    return frame.rot_adj @ h_add @ frame.rot_adj.conj().T


def nullification_residual(
    path: FramePath, i: int, h_add: CMat, pairs: Sequence[tuple[int, int]]
) -> float:
    """Max deviation |(R^dagger H_add R)_nm - (i hbar R^dagger dR/dt)_nm| over pairs.

    Pairs are 1-based ordered index pairs with n != m.  Zero means the
    add-on Hamiltonian cancels the nonadiabatic coupling in those
    transition directions, so the eigen-frame Hamiltonian has no (n, m)
    entry left.
    """
    for n, m in pairs:
        if n == m:
            raise ValueError(f"pairs must be off-diagonal, got ({n},{m})")
        if not (1 <= n <= path.dim and 1 <= m <= path.dim):
            raise ValueError(f"pair ({n},{m}) out of range for dim {path.dim}")
    h_add = as_cmat(h_add)
    ra = path._rot_adj[i]
    transformed = ra @ h_add @ ra.conj().T
    na = 1j * HBAR * (ra @ path._rdot(i))
    return max(abs(transformed[n - 1, m - 1] - na[n - 1, m - 1]) for n, m in pairs)
