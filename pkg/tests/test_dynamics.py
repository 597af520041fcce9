import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from oscnet.dynamics import (
    TrajectoryRecord,
    fundamental_residual,
    initial_velocity,
    interleave,
    parse_trajectory_csv,
    parse_trajectory_json,
    project,
    remove_zero_mode_velocity,
    solve_bosonic,
    solve_fermionic,
    time_grid,
    total_energy,
    trajectory_csv,
    trajectory_json,
    zero_mode_velocity,
)
from oscnet.errors import DimensionMismatch, InvalidParams, Unsupported
from oscnet.generators import complete_graph, path_graph
from oscnet.graph import build_graph, laplacian_bundle
from oscnet.hamiltonian import B_HAT, SIGMA_Z, build_hamiltonian
from oscnet.oracle import integrate_wave
from oscnet.spectral import decompose, sqrt_laplacian

from conftest import random_directed, random_symmetric, rel_max

TWO = build_graph(2, [(0, 1, 1.0), (1, 0, 1.0)])


def setup(g):
    b = laplacian_bundle(g)
    return b, decompose(b.L), build_hamiltonian(b)


def random_state(n, seed):
    r = np.random.default_rng(seed)
    return r.standard_normal(2 * n) + 1j * r.standard_normal(2 * n)


# --- projection ---

def test_project_examples():
    np.testing.assert_array_equal(project(np.array([1, 0, 0, 1])), [1, 1])
    np.testing.assert_array_equal(project(np.zeros(6)), np.zeros(3))
    xp, xm = np.array([1.0, 2.0, 3.0]), np.array([0.5, -1.0, 4.0])
    x_hat = np.kron(xp, [1, 0]) + np.kron(xm, [0, 1])
    np.testing.assert_array_equal(interleave(xp, xm), x_hat)
    np.testing.assert_array_equal(project(x_hat), xp + xm)
    np.testing.assert_array_equal(project(x_hat), np.kron(np.eye(3), [1, 1]) @ x_hat)


# --- fermionic ---

def test_fermionic_identity_at_zero():
    b, dec, ham = setup(random_symmetric(7, 2))
    x = random_state(7, 0)
    traj = solve_fermionic(ham, dec, x, [0.0])
    assert np.max(np.abs(traj.states[0] - x)) <= 1e-12


def test_fermionic_two_node_period():
    b, dec, ham = setup(TWO)
    x = np.array([1, 0, 0, 0], dtype=complex)
    T = 2 * np.pi / np.sqrt(2)
    traj = solve_fermionic(ham, dec, x, [0.0, T])
    np.testing.assert_allclose(traj.projected[1], traj.projected[0], atol=1e-12)


@pytest.mark.parametrize("g", [TWO, complete_graph(4), path_graph(5), random_symmetric(8, 5)])
def test_fermionic_matches_matrix_exponential(g):
    # independent route: dense expm of the 2n x 2n Hamiltonian
    b, dec, ham = setup(g)
    x = remove_zero_mode_velocity(ham, dec, random_state(g.n, 1))
    assert zero_mode_velocity(ham, dec, x) < 1e-12
    times = np.linspace(0, 5, 11)
    traj = solve_fermionic(ham, dec, x, times)
    for t, got in zip(times, traj.states):
        ref = scipy.linalg.expm(-1j * ham.H_hat * t) @ x
        np.testing.assert_allclose(got, ref, atol=1e-10)


def test_fermionic_directed_matches_matrix_exponential():
    g = build_graph(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 0.5), (2, 1, 0.3)])
    b, dec, ham = setup(g)
    x = remove_zero_mode_velocity(ham, dec, random_state(3, 4))
    times = np.linspace(0, 3, 7)
    traj = solve_fermionic(ham, dec, x, times)
    for t, got in zip(times, traj.states):
        np.testing.assert_allclose(got, scipy.linalg.expm(-1j * ham.H_hat * t) @ x, atol=1e-9)


def test_fermionic_omits_zero_mode_drift():
    # the cos/sin expansion with Mho carries no linear-in-t kernel term;
    # the gap to the exact exponential is exactly that term
    b, dec, ham = setup(random_symmetric(6, 3))
    x = random_state(6, 2)
    assert zero_mode_velocity(ham, dec, x) > 1e-3
    E0 = dec.zero_mode_projector()
    drift = np.kron(E0 @ b.sqrt_D, B_HAT) @ x
    for t in (0.5, 2.0):
        got = solve_fermionic(ham, dec, x, [t]).states[0]
        exact = scipy.linalg.expm(-1j * ham.H_hat * t) @ x
        np.testing.assert_allclose(got, exact + 1j * t * drift, atol=1e-10)


def test_fermionic_k3_vs_oracle():
    b, dec, ham = setup(complete_graph(3))
    x = remove_zero_mode_velocity(ham, dec, random_state(3, 7))
    times = time_grid(10, 0.1)
    cf = solve_fermionic(ham, dec, x, times)
    rk = integrate_wave(b.L, project(x), initial_velocity(ham, x), times, 1e-3)
    assert rel_max(rk.projected, cf.projected) <= 1e-6


@pytest.mark.parametrize("seed", range(3))
def test_fermionic_projection_solves_wave_equation(seed):
    b, dec, ham = setup(random_symmetric(8, seed))
    x = random_state(8, seed)  # holds even with zero-mode velocity content
    dt = 1e-3
    times = time_grid(2.0, dt)
    z = solve_fermionic(ham, dec, x, times).projected
    acc = (z[2:] - 2 * z[1:-1] + z[:-2]) / dt**2
    res = np.max(np.abs(acc + z[1:-1] @ b.L.T)) / np.max(np.abs(z))
    assert res <= 1e-5


@settings(max_examples=20, deadline=None)
@given(n=st.integers(2, 12), seed=st.integers(0, 1000), t1=st.floats(0, 5), t2=st.floats(0, 5))
def test_fermionic_semigroup(n, seed, t1, t2):
    b, dec, ham = setup(random_symmetric(n, seed))
    x = remove_zero_mode_velocity(ham, dec, random_state(n, seed))
    mid = solve_fermionic(ham, dec, x, [t1]).states[0]
    two_step = solve_fermionic(ham, dec, mid, [t2]).states[0]
    direct = solve_fermionic(ham, dec, x, [t1 + t2]).states[0]
    assert np.max(np.abs(two_step - direct)) <= 1e-9 * max(1.0, np.max(np.abs(direct)))


def test_fermionic_rejects_bad_state():
    b, dec, ham = setup(TWO)
    with pytest.raises(DimensionMismatch):
        solve_fermionic(ham, dec, np.zeros(3), [0.0])
    with pytest.raises(InvalidParams):
        solve_fermionic(ham, dec, np.array([np.nan, 0, 0, 0]), [0.0])
    with pytest.raises(InvalidParams):
        solve_fermionic(ham, dec, np.zeros(4), [1.0, 0.5])


# --- bosonic ---

def test_bosonic_identity_at_zero():
    _, dec, _ = setup(random_symmetric(5, 0))
    xp, xm = np.arange(5.0), np.ones(5) * 2j
    traj = solve_bosonic(dec, xp, xm, [0.0])
    np.testing.assert_allclose(traj.plus()[0], xp, atol=1e-12)
    np.testing.assert_allclose(traj.minus()[0], xm, atol=1e-12)


def test_bosonic_constant_mode():
    _, dec, _ = setup(random_symmetric(6, 1))
    traj = solve_bosonic(dec, np.ones(6), np.zeros(6), np.linspace(0, 10, 21))
    np.testing.assert_allclose(traj.plus(), 1.0, atol=1e-12)


def test_bosonic_two_node_mode():
    _, dec, _ = setup(TWO)
    times = np.linspace(0, 4, 9)
    traj = solve_bosonic(dec, [1.0, -1.0], [0.0, 0.0], times)
    expected = np.exp(-1j * np.sqrt(2) * times)[:, None] * np.array([1.0, -1.0])
    np.testing.assert_allclose(traj.plus(), expected, atol=1e-12)


def test_bosonic_matches_doubled_exponential():
    _, dec, _ = setup(random_symmetric(6, 2))
    S = sqrt_laplacian(dec).S
    x = random_state(6, 3)
    times = [0.0, 0.7, 3.1]
    traj = solve_bosonic(dec, x[0::2], x[1::2], times)
    for t, got in zip(times, traj.states):
        ref = scipy.linalg.expm(-1j * np.kron(S, SIGMA_Z) * t) @ x
        np.testing.assert_allclose(got, ref, atol=1e-10)
    np.testing.assert_allclose(traj.projected, traj.plus() + traj.minus())


def test_residual_exact_solution():
    _, dec, _ = setup(random_symmetric(6, 4))
    x = random_state(6, 5)
    traj = solve_bosonic(dec, x[0::2], x[1::2], time_grid(1.0, 1e-3))
    assert fundamental_residual(dec, traj, "plus") <= 1e-5
    assert fundamental_residual(dec, traj, "minus") <= 1e-5


def test_residual_zero_mode():
    _, dec, _ = setup(random_symmetric(6, 4))
    traj = solve_bosonic(dec, np.ones(6), np.ones(6), time_grid(1.0, 1e-3))
    assert fundamental_residual(dec, traj, "plus") <= 1e-12
    assert fundamental_residual(dec, traj, "minus") <= 1e-12


def test_residual_detects_corruption():
    _, dec, _ = setup(random_symmetric(6, 4))
    x = random_state(6, 5)
    traj = solve_bosonic(dec, x[0::2], x[1::2], time_grid(1.0, 1e-3))
    traj.states[500, 0] += 1e-2
    assert fundamental_residual(dec, traj, "plus") >= 1e-3


def test_residual_wrong_branch_sign_is_large():
    _, dec, _ = setup(random_symmetric(6, 4))
    x = random_state(6, 5)
    traj = solve_bosonic(dec, x[0::2], x[1::2], time_grid(1.0, 1e-3))
    swapped = TrajectoryRecord(traj.times, traj.projected, interleave(traj.minus(), traj.plus()))
    assert fundamental_residual(dec, swapped, "plus") > 0.1


def test_residual_second_order():
    _, dec, _ = setup(random_symmetric(8, 9))
    x = random_state(8, 1)
    dts = [1e-2, 1e-3, 1e-4]
    res = [fundamental_residual(dec, solve_bosonic(dec, x[0::2], x[1::2], time_grid(1.0, dt)), "plus") for dt in dts]
    slope = np.polyfit(np.log(dts), np.log(res), 1)[0]
    assert abs(slope - 2) <= 0.1


@settings(max_examples=20, deadline=None)
@given(n=st.integers(2, 20), seed=st.integers(0, 1000))
def test_bosonic_norm_preserved(n, seed):
    _, dec, _ = setup(random_symmetric(n, seed))
    x = random_state(n, seed)
    traj = solve_bosonic(dec, x[0::2], x[1::2], np.linspace(0, 10, 11))
    for branch in (traj.plus(), traj.minus()):
        norms = np.linalg.norm(branch, axis=1)
        assert np.max(np.abs(norms - norms[0])) <= 1e-9 * norms[0]


# --- energy ---

def test_energy_examples():
    L = laplacian_bundle(TWO).L
    assert total_energy(L, [1.0, 1.0], [0.0, 0.0]) == pytest.approx(0.0, abs=1e-15)
    assert total_energy(L, [1.0, -1.0], [0.0, 0.0]) == pytest.approx(2.0)
    with pytest.raises(Unsupported):
        total_energy(np.array([[1.0, -1.0], [0.0, 0.0]]), [1, 0], [0, 0])


# --- export ---

def test_trajectory_roundtrip():
    b, dec, ham = setup(random_symmetric(4, 0))
    traj = solve_fermionic(ham, dec, random_state(4, 0), time_grid(1, 0.25))
    text = trajectory_csv(traj)
    assert text.splitlines()[0] == "t,re(x_0),im(x_0),re(x_1),im(x_1),re(x_2),im(x_2),re(x_3),im(x_3)"
    t, z = parse_trajectory_csv(text)
    np.testing.assert_array_equal(t, traj.times)
    np.testing.assert_array_equal(z, traj.projected)
    meta, t2, z2 = parse_trajectory_json(trajectory_json(traj))
    assert meta["solver"] == "fermionic" and meta["graph_hash"] == b.graph.digest()
    np.testing.assert_array_equal(z2, traj.projected)


def test_time_grid_uniform():
    t = time_grid(10.0, 1e-3)
    assert len(t) == 10001
    assert t[-1] == pytest.approx(10.0)
    d = np.diff(t)
    assert np.max(np.abs(d - 1e-3)) <= 4 * np.finfo(float).eps * 10
