"""Speed-limit pipeline: Bures angle, Fubini-Study metric, path length,
average speed, the bound tau_QSL = L_B * tau / ell, the long-time
bound-state asymptotics, and the reduced-state / hybrid counterparts.

The initial state is fixed to (|g> + |e>)/sqrt(2) throughout, so the final
total-state overlap is (1 + u(tau))/2 and the reduced Bloch vector is
r = (Re u, -Im u, |u|^2 - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .bound_state import BoundStateInfo
from .kernel import AmplitudeGrid

__all__ = [
    "QslReport",
    "bures_angle",
    "fubini_metric",
    "path_length",
    "qsl_time",
    "asymptotic_speed",
    "asymptotic_ratio",
    "reduced_report",
    "hybrid_ratio",
    "report",
    "report_series",
    "ideal_ratio",
]

_CLAMP = 1e-12


def _cum_len(speed: np.ndarray, dt: float) -> np.ndarray:
    """Cumulative Simpson integral of a sampled speed (trapezoid below 3 points)."""
    if len(speed) < 3:
        return np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * dt)])
    return cumulative_simpson(speed, dx=dt, initial=0.0)


@dataclass(frozen=True)
class QslReport:
    tau: float
    L_B: float
    ell: float
    vbar: float
    tau_qsl: float
    ratio: float
    L_B_red: float
    ell_red: float
    ratio_red: float
    ratio_hybrid: float


def bures_angle(u_tau: complex) -> float:
    """arccos(|1 + u(tau)| / 2) for the maximally coherent initial state."""
    m = abs(1.0 + u_tau) / 2.0
    if m > 1.0 + 1e-9:
        raise ValueError(f"|1 + u| / 2 = {m} > 1: amplitude violates contraction")
    return float(np.arccos(min(m, 1.0)))


def fubini_metric(u, udot, omega0: float, alpha0: float):
    """Instantaneous squared speed of the total-state evolution:

    g = [|u'|^2 + alpha(0) |u|^2]/2 - |i(conj(u) u' - u conj(u')) - omega0 |u|^2|^2 / 4
    """
    u = np.asarray(u, dtype=complex)
    udot = np.asarray(udot, dtype=complex)
    cross = -2.0 * np.imag(np.conj(u) * udot) - omega0 * np.abs(u) ** 2
    g = 0.5 * (np.abs(udot) ** 2 + alpha0 * np.abs(u) ** 2) - 0.25 * cross**2
    g = np.where((g < 0) & (g > -_CLAMP), 0.0, g)
    if np.any(g < 0):
        raise ValueError(f"metric negative beyond clamp: min g = {np.min(g):.3e}")
    return g if g.ndim else float(g)


def path_length(grid: AmplitudeGrid, alpha0: float | None = None) -> float:
    """ell(t_max) = int_0^tmax sqrt(g_tt) dt by the composite trapezoidal rule."""
    if alpha0 is None:
        alpha0 = grid.alpha0
    speed = np.sqrt(fubini_metric(grid.u, grid.udot, grid.omega0, alpha0))
    return float(_cum_len(speed, grid.dt)[-1])


def qsl_time(L_B: float, ell: float, tau: float):
    """(tau_qsl, ratio) with tau_qsl = L_B * tau / ell.

    ell = L_B = 0 means no evolution; the ratio is defined as 1 by continuity.
    """
    if ell == 0.0:
        if L_B == 0.0:
            return tau, 1.0
        raise ValueError("ell = 0 with L_B > 0 is inconsistent")
    ratio = L_B / ell
    return ratio * tau, ratio


def asymptotic_speed(info: BoundStateInfo, alpha0: float, omega0: float) -> float:
    """Plateau speed C with C^2 = Z^2 [alpha(0) + E_b^2]/2 - Z^4 (omega0/2 - E_b)^2."""
    if not info.exists:
        raise RuntimeError("asymptotic speed requires a bound state")
    c_sq = info.Z**2 * (alpha0 + info.E_b**2) / 2.0 - info.Z**4 * (omega0 / 2.0 - info.E_b) ** 2
    if c_sq <= 0:
        raise ValueError(f"C^2 = {c_sq:.3e} <= 0: invalid asymptotic regime")
    return float(np.sqrt(c_sq))


def asymptotic_ratio(info: BoundStateInfo, alpha0: float, omega0: float, tau: float) -> float:
    """Long-time ratio arccos[sqrt(1 + Z^2 + 2Z cos(E_b tau)) / 2] / (C tau)."""
    c = asymptotic_speed(info, alpha0, omega0)
    arg = np.sqrt(abs(1.0 + info.Z**2 + 2.0 * info.Z * np.cos(info.E_b * tau))) / 2.0
    return float(np.arccos(min(arg, 1.0)) / (c * tau))


def _reduced_speed(u: np.ndarray, udot: np.ndarray) -> np.ndarray:
    """sqrt(F_red)/2 from the Bloch vector r = (Re u, -Im u, |u|^2 - 1)."""
    rdot = np.stack([udot.real, -udot.imag, 2.0 * np.real(np.conj(u) * udot)])
    rdot_sq = np.sum(rdot**2, axis=0)
    r = np.stack([u.real, -u.imag, np.abs(u) ** 2 - 1.0])
    r_dot_rdot = np.sum(r * rdot, axis=0)
    # 1 - |r|^2 = |u|^2 (1 - |u|^2); the mixed-state term is dropped at
    # (numerically) pure points, where its numerator vanishes quadratically
    denom = np.abs(u) ** 2 * (1.0 - np.abs(u) ** 2)
    f_red = rdot_sq + np.where(denom < 1e-9, 0.0, r_dot_rdot**2 / np.where(denom < 1e-9, 1.0, denom))
    return 0.5 * np.sqrt(np.maximum(f_red, 0.0))


def reduced_report(grid: AmplitudeGrid, n: int | None = None) -> tuple[float, float]:
    """(L_B_red, ell_red) of the reduced state up to grid index n (default: end)."""
    if n is None:
        n = len(grid.u) - 1
    u_tau = grid.u[n]
    f = (2.0 + 2.0 * u_tau.real) / 4.0
    L_B_red = float(np.arccos(np.sqrt(np.clip(f, 0.0, 1.0))))
    speed = _reduced_speed(grid.u[: n + 1], grid.udot[: n + 1])
    ell_red = float(_cum_len(speed, grid.dt)[-1])
    return L_B_red, ell_red


def hybrid_ratio(L_B: float, ell_red: float, tau: float) -> float:
    """Tightened bound L_B * tau / ell_red >= both plain ratios."""
    if ell_red == 0.0:
        if L_B == 0.0:
            return 1.0
        raise ValueError("ell_red = 0 with L_B > 0 is inconsistent")
    return L_B / ell_red


def ideal_ratio(omega0: float, tau):
    """Noiseless ratio: tau_qsl/tau = 2 arccos|cos(omega0 tau / 2)| / (omega0 tau)."""
    tau = np.asarray(tau, dtype=float)
    out = 2.0 * np.arccos(np.abs(np.cos(omega0 * tau / 2.0))) / (omega0 * tau)
    return out if out.ndim else float(out)


def report(grid: AmplitudeGrid, n: int | None = None) -> QslReport:
    """Full diagnostics of the evolution up to grid index n (default: end)."""
    if n is None:
        n = len(grid.u) - 1
    tau = n * grid.dt
    L_B = bures_angle(grid.u[n])
    speed = np.sqrt(fubini_metric(grid.u[: n + 1], grid.udot[: n + 1], grid.omega0, grid.alpha0))
    ell = float(_cum_len(speed, grid.dt)[-1])
    tau_qsl, ratio = qsl_time(L_B, ell, tau) if tau > 0 else (0.0, 1.0)
    L_B_red, ell_red = reduced_report(grid, n)
    _, ratio_red = qsl_time(L_B_red, ell_red, tau) if tau > 0 else (0.0, 1.0)
    rh = hybrid_ratio(L_B, ell_red, tau) if tau > 0 else 1.0
    return QslReport(
        tau=tau,
        L_B=L_B,
        ell=ell,
        vbar=ell / tau if tau > 0 else float(speed[0]),
        tau_qsl=tau_qsl,
        ratio=ratio,
        L_B_red=L_B_red,
        ell_red=ell_red,
        ratio_red=ratio_red,
        ratio_hybrid=rh,
    )


def report_series(grid: AmplitudeGrid, indices=None) -> list[QslReport]:
    """Reports over a tau-grid computed from one shared amplitude grid."""
    if indices is None:
        indices = range(1, len(grid.u))
    # cumulative path lengths shared across horizons
    speed = np.sqrt(fubini_metric(grid.u, grid.udot, grid.omega0, grid.alpha0))
    speed_red = _reduced_speed(grid.u, grid.udot)
    ell_cum = _cum_len(speed, grid.dt)
    ell_red_cum = _cum_len(speed_red, grid.dt)
    out = []
    for n in indices:
        tau = n * grid.dt
        L_B = bures_angle(grid.u[n])
        ell = float(ell_cum[n])
        ell_red = float(ell_red_cum[n])
        tau_qsl, ratio = qsl_time(L_B, ell, tau)
        f = (2.0 + 2.0 * grid.u[n].real) / 4.0
        L_B_red = float(np.arccos(np.sqrt(np.clip(f, 0.0, 1.0))))
        _, ratio_red = qsl_time(L_B_red, ell_red, tau)
        out.append(
            QslReport(
                tau=tau,
                L_B=L_B,
                ell=ell,
                vbar=ell / tau,
                tau_qsl=tau_qsl,
                ratio=ratio,
                L_B_red=L_B_red,
                ell_red=ell_red,
                ratio_red=ratio_red,
                ratio_hybrid=hybrid_ratio(L_B, ell_red, tau),
            )
        )
    return out
