import numpy as np
import pytest
from scipy.optimize import brentq

from qsdlab.spectral import SpectralDensity, alpha0
from qsdlab.spin_boson import (
    PolaronConvergenceError,
    _displacement_integral,
    alpha_tilde_zero,
    kernel_on_grid,
    renormalized_kernel,
    sbm_bound_state,
    sbm_qsl_pipeline,
    sbm_solve_u,
    solve_theta,
)


@pytest.fixture(scope="module")
def sub25():
    return SpectralDensity(eta=0.25, s=0.6, omega_c=30.0)


@pytest.fixture(scope="module")
def sub10():
    return SpectralDensity(eta=0.1, s=0.6, omega_c=30.0)


@pytest.fixture(scope="module")
def p25(sub25):
    return solve_theta(sub25, 1.0)


def test_theta_trivial_limit():
    sd = SpectralDensity(eta=0.0, s=0.6, omega_c=30.0)
    assert solve_theta(sd, 1.0).theta == 1.0


def test_theta_frozen_values(sub10, p25):
    assert solve_theta(sub10, 1.0).theta == pytest.approx(0.7659907695, abs=1e-9)
    assert p25.theta == pytest.approx(0.3558142595, abs=1e-9)


def test_theta_residual_and_bisection_agree(sub25, p25):
    residual = p25.theta - np.exp(-0.5 * _displacement_integral(sub25, p25.effective_gap))
    assert abs(residual) < 1e-12

    def g(th):
        return th - np.exp(-0.5 * _displacement_integral(sub25, th))

    lo = p25.theta + 0.05
    while g(lo) > 0:
        lo -= 0.05
    root = brentq(g, lo, 1.0, xtol=1e-13)
    assert abs(root - p25.theta) < 1e-10


def test_theta_monotone_in_coupling():
    thetas = [
        solve_theta(SpectralDensity(eta, 0.6, 30.0), 1.0).theta
        for eta in (0.05, 0.1, 0.15, 0.2, 0.25)
    ]
    assert all(a > b for a, b in zip(thetas, thetas[1:]))


def test_strong_coupling_collapse_raises():
    with pytest.raises(PolaronConvergenceError):
        solve_theta(SpectralDensity(0.5, 0.6, 30.0), 1.0)


def test_kernel_filter_inequality(sub25, p25):
    a0 = alpha_tilde_zero(sub25, p25)
    assert 0.0 < a0 < alpha0(sub25)
    k0 = renormalized_kernel(sub25, p25, 0.0)
    assert k0.imag == pytest.approx(0.0, abs=1e-12)
    assert k0.real == pytest.approx(a0, abs=1e-10)


def test_kernel_hermitian_symmetry(sub25, p25):
    for t in (0.3, 2.0):
        assert renormalized_kernel(sub25, p25, -t) == pytest.approx(
            np.conj(renormalized_kernel(sub25, p25, t))
        )


def test_grid_kernel_matches_adaptive(sub25, p25):
    ts = np.array([0.0, 0.01, 0.5, 7.0, 300.0, -1.2])
    gv = kernel_on_grid(sub25, p25, ts)
    for k, t in enumerate(ts):
        ad = renormalized_kernel(sub25, p25, float(t))
        assert abs(gv[k] - ad) <= 1e-9 * abs(ad)


def test_bound_state_flips_with_coupling(sub10, sub25, p25):
    assert not sbm_bound_state(sub10, solve_theta(sub10, 1.0)).exists
    info = sbm_bound_state(sub25, p25)
    assert info.exists and info.E_b < 0.0 and 0.0 < info.Z < 1.0
    assert info.E_b == pytest.approx(-0.04944724, abs=1e-6)
    assert info.Z == pytest.approx(0.33113353, abs=1e-6)


def test_trivial_limit_matches_bare_dynamics():
    sd = SpectralDensity(eta=0.0, s=0.6, omega_c=30.0)
    g = sbm_solve_u(sd, 1.0, 5.0, 0.01)
    assert np.max(np.abs(g.u - np.exp(-1j * g.t))) < 1e-12


def test_pipeline_reports(sub25):
    reps = sbm_qsl_pipeline(sub25, 1.0, [20.0, 50.0], dt=0.05)
    assert len(reps) == 2
    assert reps[0].tau == pytest.approx(20.0)
    assert all(0.0 < r.ratio <= 1.0 for r in reps)
    assert reps[1].ell > reps[0].ell
