"""Dense complex vectors and matrices of small fixed dimension.

Every operator and state in this package is a dense complex numpy
array: a ``CVec`` has shape ``(dim,)`` and a ``CMat`` shape
``(dim, dim)`` with ``dim <= 8`` (the concrete model is two-level, the
generic eigen-frame layer stays desk-scale).  Values are treated as
immutable after construction and all tolerances are passed explicitly.
"""

from __future__ import annotations

import numpy as np

CVec = np.ndarray
CMat = np.ndarray

MAX_DIM = 8


def as_cvec(v) -> CVec:
    """Coerce to a complex vector, validating the shape."""
    out = np.asarray(v, dtype=complex)
    if out.ndim != 1 or not 1 <= out.shape[0] <= MAX_DIM:
        raise ValueError(f"expected a vector of dimension 1..{MAX_DIM}, got shape {out.shape}")
    return out


def as_cmat(a) -> CMat:
    """Coerce to a square complex matrix, validating the shape."""
    out = np.asarray(a, dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {out.shape}")
    if not 1 <= out.shape[0] <= MAX_DIM:
        raise ValueError(f"dimension must be 1..{MAX_DIM}, got {out.shape[0]}")
    return out


def matrix_unit(dim: int, m: int, n: int) -> CMat:
    """Matrix unit sigma_mn = |m><n| with 1-based indices.

    The single nonzero entry sits in row m, column n.
    """
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"dimension must be 1..{MAX_DIM}, got {dim}")
    if not (1 <= m <= dim and 1 <= n <= dim):
        raise ValueError(f"indices ({m},{n}) out of range for dimension {dim}")
    out = np.zeros((dim, dim), dtype=complex)
    out[m - 1, n - 1] = 1.0
    return out


def identity(dim: int) -> CMat:
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"dimension must be 1..{MAX_DIM}, got {dim}")
    return np.eye(dim, dtype=complex)


def _check_square_pair(a: CMat, b: CMat) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def mul(a: CMat, b: CMat) -> CMat:
    """Matrix product a @ b."""
    a, b = as_cmat(a), as_cmat(b)
    _check_square_pair(a, b)
    return a @ b


def adjoint(a: CMat) -> CMat:
    """Conjugate transpose."""
    return as_cmat(a).conj().T.copy()


def apply(a: CMat, v: CVec) -> CVec:
    """Matrix-vector product a @ v."""
    a, v = as_cmat(a), as_cvec(v)
    if a.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {v.shape}")
    return a @ v


def inner(u: CVec, v: CVec) -> complex:
    """Inner product <u|v>, conjugate-linear in the first argument."""
    u, v = as_cvec(u), as_cvec(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def max_abs(a: np.ndarray) -> float:
    """Largest entry magnitude; the max-norm used by all tolerance checks."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(a: CMat, tol: float) -> bool:
    """True iff the max-entry deviation |a - a^dagger| is within tol."""
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    a = as_cmat(a)
    return max_abs(a - a.conj().T) <= tol
