import numpy as np
import pytest
from scipy.special import gamma

from qsdlab.spectral import (
    CorrelationFunction,
    SpectralDensity,
    alpha0,
    alpha_closed,
    alpha_quad,
    j_omega,
    j_over_omega_integral,
    j_total_integral,
    sample_correlation,
    semi_infinite_quad,
    tail_cutoff,
)


@pytest.fixture
def ohmic():
    return SpectralDensity(eta=0.05, s=1.0, omega_c=10.0)


@pytest.fixture
def subohmic():
    return SpectralDensity(eta=0.25, s=0.6, omega_c=30.0)


def test_validation_rejects_bad_parameters():
    with pytest.raises(ValueError):
        SpectralDensity(eta=-0.1, s=1.0, omega_c=10.0)
    with pytest.raises(ValueError):
        SpectralDensity(eta=0.1, s=0.0, omega_c=10.0)
    with pytest.raises(ValueError):
        SpectralDensity(eta=0.1, s=1.0, omega_c=-1.0)


def test_j_peak_and_positivity(ohmic):
    w = np.linspace(1e-6, 200.0, 4000)
    j = j_omega(ohmic, w)
    assert np.all(j >= 0)
    # Ohmic density peaks at omega = s * omega_c
    assert abs(w[np.argmax(j)] - 10.0) < 0.1


def test_alpha_zero_closed_form(ohmic, subohmic):
    for sd in (ohmic, subohmic):
        expected = sd.eta * gamma(sd.s + 1.0) * sd.omega_c**2
        assert alpha0(sd) == pytest.approx(expected, rel=1e-14)
        assert alpha_closed(sd, 0.0) == pytest.approx(expected, rel=1e-14)


def test_alpha_closed_matches_quadrature(ohmic, subohmic):
    for sd in (ohmic, subohmic):
        for t in (0.0, 0.05, 0.3, 2.0):
            assert alpha_quad(sd, t) == pytest.approx(
                alpha_closed(sd, t), abs=1e-8 * alpha0(sd)
            )


def test_alpha_hermitian_symmetry(ohmic):
    ts = np.linspace(0.1, 5.0, 17)
    assert np.allclose(alpha_closed(ohmic, -ts), np.conj(alpha_closed(ohmic, ts)))


def test_weighted_integrals(ohmic, subohmic):
    for sd in (ohmic, subohmic):
        expected_over = sd.eta * gamma(sd.s) * sd.omega_c
        assert j_over_omega_integral(sd) == pytest.approx(expected_over, rel=1e-12)
        assert j_total_integral(sd) == pytest.approx(alpha0(sd), rel=1e-10)


def test_semi_infinite_quad_gaussian():
    # int_0^inf e^{-w^2} dw = sqrt(pi)/2, no cutoff parameter involved
    val = semi_infinite_quad(lambda w: np.exp(-(w**2)), 1.0)
    assert val == pytest.approx(np.sqrt(np.pi) / 2.0, abs=1e-12)


def test_tail_cutoff_captures_weight(ohmic):
    cut = tail_cutoff(ohmic, rel_tol=1e-6)
    tail = semi_infinite_quad(lambda w: j_omega(ohmic, w + cut), ohmic.omega_c)
    assert tail / j_total_integral(ohmic) == pytest.approx(1e-6, rel=1e-3)


def test_sample_correlation_decay(ohmic):
    corr = sample_correlation(ohmic, dt=0.01, n=501)
    assert isinstance(corr, CorrelationFunction)
    mags = np.abs(corr.samples)
    assert mags[0] == pytest.approx(alpha0(ohmic), rel=1e-12)
    assert mags[-1] < 1e-3 * mags[0]
