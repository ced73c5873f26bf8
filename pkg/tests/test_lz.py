import math

import numpy as np
import pytest

from stalab import designer, frame, lz
from stalab.designer import AddParams
from stalab.lz import AngleState, LZSchedule


def test_schedule_validation():
    with pytest.raises(ValueError):
        LZSchedule(omega0=0.0)
    with pytest.raises(ValueError):
        LZSchedule(tau=1.0, tf=-1.0)


def test_h0_at_crossing():
    s = LZSchedule()
    np.testing.assert_allclose(lz.h0(s, 0.0), 0.5 * np.array([[0, 1], [1, 0]]), atol=1e-15)


def test_h0_at_unit_time():
    s = LZSchedule()
    np.testing.assert_allclose(lz.h0(s, 1.0), 0.5 * np.array([[-9, 1], [1, 9]]), atol=1e-15)


def test_h0_hermitian_everywhere():
    rng = np.random.default_rng(3)
    for kappa in (0.0, 5.0):
        s = LZSchedule(kappa=kappa)
        for t in rng.uniform(-1, 1, 50):
            h = lz.h0(s, t)
            np.testing.assert_allclose(h, h.conj().T, atol=1e-15)


def test_angle_at_crossing():
    a = lz.angle(LZSchedule(), 0.0)
    assert a.theta == pytest.approx(math.pi / 4)
    assert a.theta_dot == pytest.approx(-4.5)


def test_angle_continuous_branch():
    # scalar evaluation of the branch rule at t = -1:
    # theta = (pi - arctan(Omega/|Delta|)) / 2 since Delta = -9 < 0
    a = lz.angle(LZSchedule(), -1.0)
    assert a.theta == pytest.approx((math.pi - math.atan(1 / 9)) / 2)


def test_theta_dot_matches_difference_quotient():
    s = LZSchedule()
    h = 1e-6
    for t in (-0.8, -0.2, 0.0, 0.3, 0.9):
        fd = (lz.angle(s, t + h).theta - lz.angle(s, t - h).theta) / (2 * h)
        assert lz.angle(s, t).theta_dot == pytest.approx(fd, abs=1e-6)


def test_theta_monotone_and_symmetric():
    s = LZSchedule()
    ts = np.linspace(-1, 1, 201)
    thetas = np.array([lz.angle(s, t).theta for t in ts])
    assert np.all(np.diff(thetas) < 0)
    for t in (0.1, 0.5, 1.0):
        assert lz.angle(s, -t).theta + lz.angle(s, t).theta == pytest.approx(math.pi / 2)


def test_rotation_identity_and_quarter():
    r, radj = lz.rotation(AngleState(0.0, 0.0, 0.0, 0.0))
    np.testing.assert_allclose(r, np.eye(2), atol=1e-15)
    r, _ = lz.rotation(AngleState(math.pi / 4, 0.0, 0.0, 0.0))
    q = math.sqrt(2) / 2
    np.testing.assert_allclose(r, [[q, q], [-q, q]], atol=1e-15)


def test_rotation_unitary_random():
    rng = np.random.default_rng(5)
    for _ in range(50):
        a = AngleState(rng.uniform(0, math.pi / 2), 0.0, rng.uniform(-4, 4), 0.0)
        r, radj = lz.rotation(a)
        np.testing.assert_allclose(radj @ r, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(radj, r.conj().T, atol=1e-15)


def test_rotation_columns_are_eigenvectors():
    s = LZSchedule(kappa=3.0)
    for t in (-0.9, -0.1, 0.4, 1.0):
        a = lz.angle(s, t)
        r, _ = lz.rotation(a)
        np.testing.assert_allclose(r[:, 0], lz.eigenstate_1(a), atol=1e-15)
        np.testing.assert_allclose(r[:, 1], lz.eigenstate_2(a), atol=1e-15)


def test_eigenvectors_solve_h0():
    s = LZSchedule(kappa=2.0)
    for t in (-1.0, -0.3, 0.0, 0.7):
        a = lz.angle(s, t)
        h = lz.h0(s, t)
        e1, e2 = lz.energies(s, t)
        v1, v2 = lz.eigenstate_1(a), lz.eigenstate_2(a)
        assert np.linalg.norm(h @ v1 - e1 * v1) < 1e-12
        assert np.linalg.norm(h @ v2 - e2 * v2) < 1e-12
        assert e1 < 0 < e2


def test_nonadiabatic_closed_reductions():
    a = AngleState(0.6, -2.0, 0.0, 0.0)
    na = lz.nonadiabatic_closed(a)
    np.testing.assert_allclose(na, [[0, -2j], [2j, 0]], atol=1e-15)
    static = lz.nonadiabatic_closed(AngleState(0.6, 0.0, 0.3, 0.0))
    np.testing.assert_allclose(static, np.zeros((2, 2)), atol=1e-15)


def test_nonadiabatic_closed_matches_finite_difference():
    s = LZSchedule(kappa=5.0)
    times = frame.uniform_times(-0.05, 0.05, 1e-5)
    path = frame.FramePath.from_hamiltonian(lambda t: lz.h0(s, t), times)
    for i in (1, len(path) // 2, len(path) - 2):
        closed = lz.nonadiabatic_closed(lz.angle(s, times[i]))
        fd = frame.nonadiabatic_term(path, i)
        assert np.max(np.abs(fd - closed)) < 1e-6


def test_h_cd_reduction_and_hermiticity():
    a = AngleState(0.6, -2.0, 0.0, 0.0)
    np.testing.assert_allclose(lz.h_cd(a), [[0, -2j], [2j, 0]], atol=1e-15)
    rng = np.random.default_rng(9)
    for _ in range(20):
        a = AngleState(rng.uniform(0.01, 1.5), rng.normal(), rng.normal(), rng.normal())
        h = lz.h_cd(a)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-15)


def test_h_cd_equals_transitionless_design():
    # the add-on with alpha = -(phi_dot/2) sin(2 theta) reproduces the
    # counterdiabatic operator entrywise
    s = LZSchedule(kappa=5.0)
    p = AddParams(alpha=designer.alpha_transitionless())
    for t in (-0.8, -0.2, 0.1, 0.9):
        a = lz.angle(s, t)
        solved = designer.solve_add(a, p, t)
        np.testing.assert_allclose(solved.h_add, lz.h_cd(a), atol=1e-14)


def test_adiabaticity_ratio_at_crossing():
    s = LZSchedule()
    a = lz.angle(s, 0.0)
    e1, e2 = lz.energies(s, 0.0)
    assert abs(a.theta_dot) / (e2 - e1) == pytest.approx(4.5)
