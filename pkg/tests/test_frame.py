import math

import numpy as np
import pytest

from stalab import designer, frame, lz
from stalab.designer import AddParams, Direction
from stalab.frame import FramePath, build_frame, uniform_times
from stalab.lz import LZSchedule
from stalab.smallmat import max_abs


def lz_path(s, t0, t1, step):
    return FramePath.from_hamiltonian(lambda t: lz.h0(s, t), uniform_times(t0, t1, step))


def test_build_frame_diagonal():
    fr = build_frame(np.diag([-0.5, 0.5]))
    np.testing.assert_allclose(fr.eigvecs[0], [1, 0], atol=1e-15)
    np.testing.assert_allclose(fr.eigvecs[1], [0, 1], atol=1e-15)
    np.testing.assert_allclose(fr.eigvals, [-0.5, 0.5], atol=1e-15)


def test_build_frame_symmetric():
    fr = build_frame(0.5 * np.array([[0, 1], [1, 0]]))
    q = math.sqrt(2) / 2
    np.testing.assert_allclose(fr.eigvals, [-0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(np.abs(fr.eigvecs[0]), [q, q], atol=1e-15)
    np.testing.assert_allclose(np.abs(fr.eigvecs[1]), [q, q], atol=1e-15)


def test_build_frame_lz_crossing_eigvals():
    fr = build_frame(lz.h0(LZSchedule(), 0.0))
    np.testing.assert_allclose(fr.eigvals, [-0.5, 0.5], atol=1e-15)


def test_build_frame_rejects_non_orthonormal_basis():
    bad = lambda h: [np.array([1.0, 0.0]), np.array([1.0, 1.0]) / math.sqrt(2)]
    with pytest.raises(ValueError, match="orthonormal"):
        build_frame(np.eye(2), eigensolver=bad)


def test_build_frame_needs_solver_beyond_two_levels():
    with pytest.raises(ValueError, match="eigensolver"):
        build_frame(np.eye(3))


def test_rot_adj_rows_are_bras():
    s = LZSchedule(kappa=2.0)
    fr = build_frame(lz.h0(s, 0.3), t=0.3)
    for m in range(2):
        np.testing.assert_allclose(fr.rot_adj[m], fr.eigvecs[m].conj(), atol=1e-15)


def test_to_eigen_picture_basis_vector():
    fr = build_frame(lz.h0(LZSchedule(), -0.4))
    out = frame.to_eigen_picture(fr, fr.eigvecs[0])
    np.testing.assert_allclose(out, [1, 0], atol=1e-14)
    np.testing.assert_allclose(frame.to_eigen_picture(fr, [0, 0]), [0, 0], atol=1e-15)


def test_to_eigen_picture_bare_start():
    # scalar oracle: theta(tau) on the continuous branch, amplitudes
    # (cos theta, sin theta) for a |1> start at phi = 0
    theta_tau = (math.pi - math.atan(1 / 9)) / 2
    fr = build_frame(lz.h0(LZSchedule(), -1.0), t=-1.0)
    out = frame.to_eigen_picture(fr, [1, 0])
    np.testing.assert_allclose(out, [math.cos(theta_tau), math.sin(theta_tau)], atol=1e-12)
    assert abs(out[0]) == pytest.approx(0.0553, abs=5e-5)
    assert abs(out[1]) == pytest.approx(0.9985, abs=5e-5)


def test_to_eigen_picture_dimension_mismatch():
    fr = build_frame(lz.h0(LZSchedule(), 0.0))
    with pytest.raises(ValueError):
        frame.to_eigen_picture(fr, [1, 0, 0])


def test_nonadiabatic_term_static_hamiltonian():
    h = 0.5 * np.array([[0, 1], [1, 0]])
    path = FramePath.from_hamiltonian(lambda t: h, uniform_times(0, 1, 1e-2))
    np.testing.assert_allclose(frame.nonadiabatic_term(path, 5), np.zeros((2, 2)), atol=1e-12)
    np.testing.assert_allclose(frame.cd_term(path, 5), np.zeros((2, 2)), atol=1e-12)


def test_nonadiabatic_term_boundary_index():
    path = lz_path(LZSchedule(), -0.01, 0.01, 1e-3)
    with pytest.raises(IndexError):
        frame.nonadiabatic_term(path, 0)
    with pytest.raises(IndexError):
        frame.nonadiabatic_term(path, len(path) - 1)


def test_nonadiabatic_term_lz_structure():
    s = LZSchedule()
    path = lz_path(s, -0.002, 0.002, 2e-5)
    i = len(path) // 2  # t = 0
    na = frame.nonadiabatic_term(path, i)
    assert abs(na[0, 0]) < 1e-8 and abs(na[1, 1]) < 1e-8
    td = lz.angle(s, path.times[i]).theta_dot
    assert na[0, 1] == pytest.approx(1j * td, abs=1e-6)
    assert abs(na[0, 1]) == pytest.approx(4.5, abs=1e-6)


def test_cd_term_matches_closed_form():
    s = LZSchedule()
    path = lz_path(s, -0.1, 0.1, 2e-5)
    for i in range(1, len(path) - 1, 500):
        t = path.times[i]
        assert max_abs(frame.cd_term(path, i) - lz.h_cd(lz.angle(s, t))) < 1e-6
        # closed-form diagonal vanishes at phi = 0; FD leaves stencil-level noise
        assert abs(np.trace(frame.cd_term(path, i))) < 1e-6


def test_cd_term_convergence_factor():
    # second-order stencil: halving the step cuts the closed-form
    # deviation by ~4, at least 3
    s = LZSchedule()

    def dev(step):
        path = lz_path(s, -0.02, 0.02, step)
        i = len(path) // 2
        return max_abs(frame.cd_term(path, i) - lz.h_cd(lz.angle(s, path.times[i])))

    assert dev(1e-3) / dev(5e-4) >= 3.0


def test_transformed_add_identity_and_own_hamiltonian():
    s = LZSchedule(kappa=1.0)
    h = lz.h0(s, 0.2)
    fr = build_frame(h, t=0.2)
    np.testing.assert_allclose(frame.transformed_add(fr, np.eye(2)), np.eye(2), atol=1e-14)
    np.testing.assert_allclose(
        frame.transformed_add(fr, h), np.diag(fr.eigvals), atol=1e-14
    )


def test_transformed_add_round_trip():
    rng = np.random.default_rng(23)
    fr = build_frame(lz.h0(LZSchedule(kappa=2.0), 0.4), t=0.4)
    for _ in range(10):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        r = fr.rot
        back = r @ frame.transformed_add(fr, a) @ fr.rot_adj
        assert max_abs(back - a) < 1e-10


def test_transformed_solved_add_nullifies_offdiagonal():
    # Hermitian constraint solution: R^dag H_add R reproduces the
    # off-diagonal of i hbar R^dag dR/dt (here via the closed form)
    s = LZSchedule(kappa=5.0)
    p = AddParams(alpha=designer.alpha_theta_dot(2.0))
    for t in (-0.7, 0.0, 0.5):
        a = lz.angle(s, t)
        fr = build_frame(lz.h0(s, t), t=t)
        transformed = frame.transformed_add(fr, designer.solve_add(a, p, t).h_add)
        closed = lz.nonadiabatic_closed(a)
        assert abs(transformed[0, 1] - closed[0, 1]) < 1e-8
        assert abs(transformed[1, 0] - closed[1, 0]) < 1e-8


def test_built_frame_matches_analytic_gauge():
    # the closed-form solver reproduces the analytic eigenvectors exactly,
    # not just up to a phase
    for kappa in (0.0, 5.0):
        s = LZSchedule(kappa=kappa)
        for t in (-1.0, -0.2, 0.0, 0.7):
            a = lz.angle(s, t)
            fr = build_frame(lz.h0(s, t), t=t)
            np.testing.assert_allclose(fr.eigvecs[0], lz.eigenstate_1(a), atol=1e-12)
            np.testing.assert_allclose(fr.eigvecs[1], lz.eigenstate_2(a), atol=1e-12)


def test_nullification_residual_hermitian_family_across_grid():
    # a solved Hermitian add-on cancels both directions everywhere
    s = LZSchedule()
    p = AddParams(alpha=designer.alpha_theta_dot(2.0))
    path = lz_path(s, -0.05, 0.05, 2e-5)
    for i in range(1, len(path) - 1, 499):
        t = path.times[i]
        h_add = designer.solve_add(lz.angle(s, t), p, t).h_add
        assert frame.nullification_residual(path, i, h_add, [(1, 2), (2, 1)]) <= 1e-6


def test_nullification_residual_cd_term():
    s = LZSchedule()
    path = lz_path(s, -0.01, 0.01, 2e-5)
    i = len(path) // 2
    h_add = lz.h_cd(lz.angle(s, path.times[i]))
    res = frame.nullification_residual(path, i, h_add, [(1, 2), (2, 1)])
    assert res < 1e-6


def test_nullification_residual_zero_add():
    s = LZSchedule()
    path = lz_path(s, -0.001, 0.001, 2e-5)
    i = len(path) // 2
    res = frame.nullification_residual(path, i, np.zeros((2, 2)), [(1, 2)])
    assert res == pytest.approx(4.5, abs=1e-5)


def test_nullification_residual_one_way():
    # gain/loss add-on cancelling only one direction: residual ~0 on the
    # (1,2) pair, 2 hbar |gamma| sin(2 theta) on the other
    s = LZSchedule()
    gamma = 0.5
    p = AddParams(gamma=gamma, direction=Direction.SUPPRESS_INTO_2)
    path = lz_path(s, -0.001, 0.001, 2e-5)
    i = len(path) // 2
    t = path.times[i]
    a = lz.angle(s, t)
    h_add = designer.solve_add(a, p, t).h_add
    assert frame.nullification_residual(path, i, h_add, [(1, 2)]) < 1e-6
    expected = 2 * gamma * math.sin(2 * a.theta)
    assert frame.nullification_residual(path, i, h_add, [(2, 1)]) == pytest.approx(
        expected, abs=1e-6
    )


def test_nullification_residual_rejects_diagonal_pairs():
    path = lz_path(LZSchedule(), -0.01, 0.01, 1e-3)
    with pytest.raises(ValueError):
        frame.nullification_residual(path, 1, np.zeros((2, 2)), [(1, 1)])


def test_eigenpair_residual_random_times():
    rng = np.random.default_rng(31)
    for kappa in (0.0, 5.0):
        s = LZSchedule(kappa=kappa)
        for t in rng.uniform(-1, 1, 100):
            h = lz.h0(s, t)
            fr = build_frame(h, t=t)
            for v, ev in zip(fr.eigvecs, fr.eigvals):
                assert np.linalg.norm(h @ v - ev * v) <= 1e-10
            assert max_abs(fr.rot.conj().T @ fr.rot - np.eye(2)) <= 1e-12


def test_three_level_path_with_supplied_solver():
    # rotation in the (1,2) plane of a fixed diagonal: the nonadiabatic
    # coupling between the rotating pair is i*omega exactly
    omega = 0.3
    d = np.diag([1.0, 2.0, 4.0])

    def h_of_t(t):
        c, s = math.cos(omega * t), math.sin(omega * t)
        o = np.array([[c, s, 0], [-s, c, 0], [0, 0, 1.0]])
        return o @ d @ o.T

    def solver(h):
        _, vecs = np.linalg.eigh(h)
        return [vecs[:, i] for i in range(3)]

    path = FramePath.from_hamiltonian(h_of_t, uniform_times(0.0, 0.01, 1e-4), solver)
    i = len(path) // 2
    na = frame.nonadiabatic_term(path, i)
    assert na[0, 1] == pytest.approx(1j * omega, abs=1e-6)
    assert na[1, 0] == pytest.approx(-1j * omega, abs=1e-6)
    assert abs(na[0, 2]) < 1e-9 and abs(na[2, 1]) < 1e-9
    assert max_abs(np.diag(np.diag(na))) < 1e-9


def test_path_requires_increasing_times():
    with pytest.raises(ValueError):
        FramePath.from_hamiltonian(lambda t: np.eye(2), np.array([0.0, 0.0, 1.0]))
