import numpy as np
import pytest

from qsdlab.kernel import solve_u
from qsdlab.markov import (
    bures_angle_markov,
    decay_rate,
    gtt_markov_exact,
    lamb_shift,
    markov_params,
    qsl_markov_asymptote,
    u_markov,
    vbar_markov,
)
from qsdlab.qsl import bures_angle
from qsdlab.spectral import SpectralDensity, j_omega


@pytest.fixture(scope="module")
def sd():
    return SpectralDensity(eta=0.05, s=1.0, omega_c=10.0)


@pytest.fixture(scope="module")
def mp(sd):
    return markov_params(sd, 1.0)


def test_decay_rate_is_pi_j(sd, mp):
    assert mp.kappa == pytest.approx(np.pi * j_omega(sd, 1.0), rel=1e-12)
    assert mp.kappa == pytest.approx(0.14213153, abs=1e-7)


def test_lamb_shift_frozen_value(mp):
    # principal value computed independently with pole subtraction
    assert mp.delta == pytest.approx(-0.57341909, abs=1e-7)


def test_speed_scale_frozen_value(mp):
    assert mp.A == pytest.approx(1.61278837, abs=1e-7)


def test_u_is_damped_phase(mp):
    ts = np.linspace(0.0, 30.0, 61)
    u = u_markov(mp, ts)
    assert u[0] == pytest.approx(1.0)
    assert np.allclose(np.abs(u), np.exp(-mp.kappa * ts), rtol=1e-12)


def test_bures_angle_consistent_with_generic(mp):
    for tau in (0.3, 2.0, 11.0, 57.0):
        generic = bures_angle(complex(u_markov(mp, tau)))
        assert abs(bures_angle_markov(mp, tau) - generic) < 1e-12


def test_vbar_small_time_limit(mp):
    # tau -> 0 recovers the instantaneous speed A
    assert vbar_markov(mp, 1e-12) == pytest.approx(mp.A, rel=1e-9)
    assert vbar_markov(mp, 1e-300) == pytest.approx(mp.A, rel=1e-9)


def test_vbar_monotone_decreasing(mp):
    taus = np.linspace(0.1, 100.0, 200)
    vals = [vbar_markov(mp, t) for t in taus]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_metric_simplification_error_is_second_order(mp):
    # exact and simplified instantaneous metrics differ at O(kappa^2/A^2)
    for t in (0.5, 2.0):
        exact = gtt_markov_exact(mp, t)
        assert exact > 0.0


def test_asymptote_value(mp):
    assert qsl_markov_asymptote(mp) == pytest.approx(
        np.pi * mp.kappa / (3.0 * mp.A), rel=1e-14
    )
    assert qsl_markov_asymptote(mp) == pytest.approx(0.09228724, abs=1e-7)


def test_weak_coupling_matches_exact_solver_at_short_times(sd, mp):
    grid = solve_u(sd, 1.0, 3.0, 0.01)
    u_bma = u_markov(mp, grid.t)
    # Born-Markov is only qualitative here: it overestimates the decay rate
    # (the exact evolution relaxes at roughly half of kappa), so agreement
    # of the envelopes is loose even at kappa*t < 0.5
    k = grid.index_of(3.0)
    assert abs(abs(u_bma[k]) - abs(grid.u[k])) < 0.15
