"""Born-Markov closed forms: decay rate kappa = pi*J(omega0), the
principal-value frequency shift, the exponential amplitude, and the analytic
long-time speed and speed-limit asymptotes they imply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .spectral import QuadratureError, SpectralDensity, alpha0, j_omega, semi_infinite_quad

__all__ = [
    "MarkovParams",
    "decay_rate",
    "lamb_shift",
    "markov_params",
    "u_markov",
    "vbar_markov",
    "qsl_markov_asymptote",
    "bures_angle_markov",
    "gtt_markov_exact",
    "gtt_markov_simplified",
]


@dataclass(frozen=True)
class MarkovParams:
    kappa: float
    delta: float
    A: float
    omega0: float
    alpha0: float


def decay_rate(sd: SpectralDensity, omega0: float = 1.0) -> float:
    return float(np.pi * j_omega(sd, omega0))


def lamb_shift(sd: SpectralDensity, omega0: float = 1.0) -> float:
    """Principal value of int_0^inf J(w)/(omega0 - w) dw.

    The pole is removed by subtracting J(omega0) on the symmetric interval
    [0, 2*omega0], where the subtracted log term integrates to zero; the
    remainder [2*omega0, inf) is pole-free.
    """
    if omega0 <= 0:
        raise ValueError("omega0 must be > 0")
    if sd.eta == 0:
        return 0.0
    j0 = j_omega(sd, omega0)
    inner, err = quad(
        lambda w: (j_omega(sd, w) - j0) / (omega0 - w) if w != omega0 else 0.0,
        0.0,
        2.0 * omega0,
        epsabs=1e-12,
        epsrel=0.0,
        points=[omega0],
        limit=500,
    )
    if err > 1e-8:
        raise QuadratureError(f"inner PV quadrature error {err:.2e}", achieved=err)
    outer = semi_infinite_quad(
        lambda w: j_omega(sd, w + 2.0 * omega0) / (-omega0 - w), sd.omega_c, tol=1e-12
    )
    return inner + outer


def markov_params(sd: SpectralDensity, omega0: float = 1.0) -> MarkovParams:
    kappa = decay_rate(sd, omega0)
    delta = lamb_shift(sd, omega0)
    a0 = alpha0(sd)
    a_sq = (a0 + kappa**2 + (omega0 + delta) ** 2) / 2.0
    return MarkovParams(kappa=kappa, delta=delta, A=float(np.sqrt(a_sq)), omega0=omega0, alpha0=a0)


def u_markov(p: MarkovParams, t):
    """Weak-coupling amplitude e^{-[kappa + i(omega0 + delta)] t}."""
    t = np.asarray(t, dtype=float)
    out = np.exp(-(p.kappa + 1j * (p.omega0 + p.delta)) * t)
    return out if out.ndim else complex(out)


def vbar_markov(p: MarkovParams, tau: float) -> float:
    """Average speed A(1 - e^{-kappa*tau})/(kappa*tau); -> A as tau -> 0."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    x = p.kappa * tau
    if x < 1e-8:
        return p.A * (1.0 - 0.5 * x)
    return p.A * (1.0 - np.exp(-x)) / x


def qsl_markov_asymptote(p: MarkovParams) -> float:
    """Long-time speed-limit ratio pi*kappa/(3A)."""
    return float(np.pi * p.kappa / (3.0 * p.A))


def bures_angle_markov(p: MarkovParams, tau):
    """arccos[sqrt(1 + e^{-2 kappa tau} + 2 e^{-kappa tau} cos((omega0+delta) tau)) / 2],
    i.e. the generic Bures angle evaluated on the weak-coupling amplitude."""
    tau = np.asarray(tau, dtype=float)
    e = np.exp(-p.kappa * tau)
    arg = np.sqrt(np.abs(1.0 + e**2 + 2.0 * e * np.cos((p.omega0 + p.delta) * tau))) / 2.0
    out = np.arccos(np.clip(arg, -1.0, 1.0))
    return out if out.ndim else float(out)


def gtt_markov_exact(p: MarkovParams, t):
    """Exact weak-coupling metric A^2 e^{-2kt} - (omega0 + 2 delta)^2 e^{-4kt}/4."""
    t = np.asarray(t, dtype=float)
    out = p.A**2 * np.exp(-2.0 * p.kappa * t) - 0.25 * (p.omega0 + 2.0 * p.delta) ** 2 * np.exp(
        -4.0 * p.kappa * t
    )
    return out if out.ndim else float(out)


def gtt_markov_simplified(p: MarkovParams, t):
    """Leading weak-coupling metric A^2 e^{-2kt} (the form behind the asymptote)."""
    t = np.asarray(t, dtype=float)
    out = p.A**2 * np.exp(-2.0 * p.kappa * t)
    return out if out.ndim else float(out)
