"""Bath spectral density J(w) = eta * w^s * wc^(1-s) * exp(-w/wc) and its
correlation function.

All frequencies are measured in units of the bare system frequency and all
times in its inverse, so omega0 = 1 (two-level model) or Delta = 1
(spin-boson) internally.
"""

from __future__ import annotations

import warnings

from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import gamma

__all__ = [
    "SpectralDensity",
    "CorrelationFunction",
    "QuadratureError",
    "j_omega",
    "alpha_closed",
    "alpha_quad",
    "alpha0",
    "j_over_omega_integral",
    "j_total_integral",
    "tail_cutoff",
    "semi_infinite_quad",
]

QUAD_TOL = 1e-12


class QuadratureError(RuntimeError):
    """Raised when an adaptive quadrature cannot reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class SpectralDensity:
    """Exponential-cutoff bath family: eta >= 0 coupling, s > 0 exponent
    (s = 1 Ohmic, s < 1 sub-Ohmic), omega_c > 0 cutoff."""

    eta: float
    s: float = 1.0
    omega_c: float = 10.0

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if self.s <= 0:
            raise ValueError(f"s must be > 0, got {self.s}")
        if self.omega_c <= 0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")


@dataclass(frozen=True)
class CorrelationFunction:
    """Kernel alpha(t) sampled on the uniform grid t_n = n*dt, n >= 0.

    Negative arguments follow from Hermitian symmetry alpha(-t) = conj(alpha(t)).
    """

    samples: np.ndarray
    dt: float
    alpha0: float


def j_omega(sd: SpectralDensity, omega):
    """Spectral density J(omega); omega >= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("j_omega is defined for omega >= 0")
    out = sd.eta * omega**sd.s * sd.omega_c ** (1.0 - sd.s) * np.exp(-omega / sd.omega_c)
    return out if out.ndim else float(out)


def alpha_closed(sd: SpectralDensity, t):
    """Correlation function alpha(t) = int_0^inf J(w) e^{-iwt} dw in closed form:
    eta * Gamma(s+1) * wc^2 * (1 + i*wc*t)^(-(s+1))."""
    t = np.asarray(t, dtype=float)
    out = sd.eta * gamma(sd.s + 1.0) * sd.omega_c**2 * (1.0 + 1j * sd.omega_c * t) ** (
        -(sd.s + 1.0)
    )
    return out if out.ndim else complex(out)


def alpha0(sd: SpectralDensity) -> float:
    """alpha(0) = int_0^inf J dw = eta * Gamma(s+1) * wc^2 (real)."""
    return sd.eta * gamma(sd.s + 1.0) * sd.omega_c**2


def semi_infinite_quad(f, omega_c, tol=QUAD_TOL, limit=2000):
    """Integrate f over [0, inf) through the substitution w = wc*x/(1-x),
    x in [0, 1), so no hard frequency cutoff enters the result."""

    def g(x):
        w = omega_c * x / (1.0 - x)
        return f(w) * omega_c / (1.0 - x) ** 2

    with warnings.catch_warnings():
        # the error estimate is checked explicitly below
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(g, 0.0, 1.0, epsabs=tol, epsrel=1e-12, limit=limit)
    if err > max(100.0 * tol, 1e-9 * abs(val)) and err > 1e-9:
        raise QuadratureError(
            f"quadrature did not converge: estimated error {err:.3e}", achieved=err
        )
    return val


def alpha_quad(sd: SpectralDensity, t) -> complex:
    """Quadrature evaluation of alpha(t), independent of the closed form.

    Uses QUADPACK's oscillatory weights over a finite window that carries all
    but 1e-13 of the spectral weight; the neglected tail is below that level.
    """
    if t == 0.0:
        return complex(semi_infinite_quad(lambda w: j_omega(sd, w), sd.omega_c), 0.0)
    cut = tail_cutoff(sd, rel_tol=1e-13)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        re, re_err = quad(
            lambda w: j_omega(sd, w), 0.0, cut, weight="cos", wvar=t, limit=2000
        )
        im, im_err = quad(
            lambda w: j_omega(sd, w), 0.0, cut, weight="sin", wvar=t, limit=2000
        )
    if max(re_err, im_err) > max(1e-9, 1e-10 * alpha0(sd)):
        raise QuadratureError(
            f"oscillatory quadrature error {max(re_err, im_err):.3e}"
        )
    return complex(re, -im)


def j_over_omega_integral(sd: SpectralDensity) -> float:
    """int_0^inf J(w)/w dw = eta * Gamma(s) * wc."""
    return sd.eta * gamma(sd.s) * sd.omega_c


def j_total_integral(sd: SpectralDensity) -> float:
    """int_0^inf J(w) dw, same value as alpha(0)."""
    return alpha0(sd)


def tail_cutoff(sd: SpectralDensity, rel_tol: float = 1e-6) -> float:
    """Frequency Omega with int_Omega^inf J < rel_tol * int_0^inf J.

    Solved from the regularized upper incomplete gamma function of order s+1.
    """
    from scipy.optimize import brentq
    from scipy.special import gammaincc

    if sd.eta == 0:
        return sd.omega_c
    x = brentq(lambda x: gammaincc(sd.s + 1.0, x) - rel_tol, 1e-12, 1e4)
    return x * sd.omega_c


def sample_correlation(sd: SpectralDensity, dt: float, n: int) -> CorrelationFunction:
    """alpha(t) on the n+1 point grid used by the memory-kernel solver."""
    t = dt * np.arange(n + 1)
    return CorrelationFunction(samples=alpha_closed(sd, t), dt=dt, alpha0=alpha0(sd))
