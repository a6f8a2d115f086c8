import numpy as np
import pytest

from qsdlab.kernel import solve_u
from qsdlab.spectral import SpectralDensity, alpha_closed, j_total_integral
from qsdlab.trajectories import (
    BathConfigError,
    build_bath,
    ensemble_average,
    evolve_single_excitation,
    reduced_state_from_u,
    run_ensemble,
    sample_noise,
    stochastic_trajectory,
)


@pytest.fixture(scope="module")
def sd():
    return SpectralDensity(eta=0.05, s=1.0, omega_c=10.0)


@pytest.fixture(scope="module")
def grid(sd):
    return solve_u(sd, 1.0, 20.0, 0.01)


@pytest.fixture(scope="module")
def bath(sd):
    return build_bath(sd, 2000, 20.0)


def test_bath_weight_sum(sd, bath):
    assert np.sum(bath.couplings**2) == pytest.approx(j_total_integral(sd), rel=1e-4)


def test_bath_recurrence_guard(sd):
    with pytest.raises(BathConfigError) as err:
        build_bath(sd, 150, 50.0)
    assert "n_modes >=" in str(err.value)
    with pytest.raises(BathConfigError):
        build_bath(sd, 50, 1.0)


def test_unitary_propagation_matches_solver(sd, grid, bath):
    c_e = evolve_single_excitation(bath, 1.0, 20.0, 0.01)
    assert c_e[0] == pytest.approx(1.0)
    assert np.max(np.abs(c_e - grid.u)) < 1e-3


def test_noise_is_reproducible(bath, grid):
    a = sample_noise(bath, grid.t[:50], seed=3, index=7)
    b = sample_noise(bath, grid.t[:50], seed=3, index=7)
    c = sample_noise(bath, grid.t[:50], seed=3, index=8)
    assert np.array_equal(a.z_bar_t, b.z_bar_t)
    assert not np.array_equal(a.z_bar_t, c.z_bar_t)


def test_noise_covariance(sd, bath):
    ts = np.array([0.0, 0.1, 0.4])
    m = 4000
    samples = np.stack([sample_noise(bath, ts, 11, i).z_bar_t for i in range(m)])
    for a in range(3):
        for b in range(3):
            prods = np.conj(samples[:, a]) * samples[:, b]
            expected = alpha_closed(sd, ts[a] - ts[b])
            sigma = np.std(prods) / np.sqrt(m)
            assert abs(np.mean(prods) - expected) < 5.0 * sigma


def test_single_trajectory_structure(bath, grid):
    tr = stochastic_trajectory(bath, 1.0, grid, seed=5, index=0)
    assert np.allclose(tr.c_e, grid.u / np.sqrt(2.0))
    assert tr.c_g[0] == pytest.approx(1.0 / np.sqrt(2.0))


def test_ensemble_average_requires_samples(bath, grid):
    with pytest.raises(ValueError):
        ensemble_average([stochastic_trajectory(bath, 1.0, grid, 5, i) for i in range(3)])


def test_batched_matches_sequential(bath, grid):
    trs = [stochastic_trajectory(bath, 1.0, grid, seed=5, index=i) for i in range(120)]
    seq = ensemble_average(trs)
    bat = run_ensemble(bath, 1.0, grid, n_traj=120, seed=5, batch=50)
    for key in ("rho_ee", "rho_gg", "rho_eg"):
        assert np.max(np.abs(seq[key] - bat[key])) < 1e-12


def test_ensemble_recovers_reduced_state(bath, grid):
    rho = run_ensemble(bath, 1.0, grid, n_traj=2000, seed=9)
    tol = 5.0 / np.sqrt(2000)
    for t in (5.0, 20.0):
        k = grid.index_of(t)
        target = reduced_state_from_u(grid, t)
        assert abs(rho["rho_ee"][k] - target[0, 0]) < tol
        assert abs(rho["rho_eg"][k] - target[0, 1]) < tol
        assert abs(rho["rho_ee"][k] + rho["rho_gg"][k] - 1.0) < tol


def test_reduced_state_is_physical(grid):
    rho = reduced_state_from_u(grid, 10.0)
    assert rho[0, 0] + rho[1, 1] == pytest.approx(1.0)
    assert rho[0, 1] == pytest.approx(np.conj(rho[1, 0]))
    evals = np.linalg.eigvalsh(rho)
    assert np.all(evals >= -1e-12)
