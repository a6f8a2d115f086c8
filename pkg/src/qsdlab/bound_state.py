"""Bound-state analysis of the total system-bath spectrum.

An isolated level below the continuum exists when
y(0) = omega0 - int_0^inf J(w)/w dw < 0. Its energy E_b solves
y(varpi) = varpi on varpi < 0 and its residue weight
Z = [1 + int J(w)/(E_b - w)^2 dw]^(-1) sets the non-decaying fraction of
the amplitude, u(t) -> Z e^{-i E_b t}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .spectral import (
    SpectralDensity,
    j_omega,
    j_over_omega_integral,
    j_total_integral,
    semi_infinite_quad,
    tail_cutoff,
)

__all__ = [
    "BoundStateInfo",
    "SpectrumSlice",
    "BracketError",
    "y_value",
    "find_bound_state",
    "asymptotic_u",
    "energy_spectrum",
]

ROOT_TOL = 1e-10


class BracketError(RuntimeError):
    """The root bracket grew past any physically possible bound; indicates a
    quadrature fault rather than a missing root."""


@dataclass(frozen=True)
class BoundStateInfo:
    exists: bool
    E_b: float | None
    Z: float | None
    y0: float


@dataclass(frozen=True)
class SpectrumSlice:
    eta: float
    band: np.ndarray
    bound_branch: float | None


def y_value(sd: SpectralDensity, omega0: float, varpi: float) -> float:
    """y(varpi) = omega0 - int_0^inf J(w)/(w - varpi) dw for varpi <= 0."""
    if varpi > 0:
        raise ValueError("y is not defined for varpi > 0 (integrand poles)")
    if varpi == 0:
        return omega0 - j_over_omega_integral(sd)
    integral = semi_infinite_quad(
        lambda w: j_omega(sd, w) / (w - varpi), sd.omega_c, tol=1e-13
    )
    return omega0 - integral


def _residue_weight(sd: SpectralDensity, E_b: float) -> float:
    integral = semi_infinite_quad(
        lambda w: j_omega(sd, w) / (E_b - w) ** 2, sd.omega_c, tol=1e-13
    )
    return 1.0 / (1.0 + integral)


def find_bound_state(sd: SpectralDensity, omega0: float = 1.0) -> BoundStateInfo:
    """Locate the isolated root of y(varpi) = varpi below the continuum."""
    y0 = y_value(sd, omega0, 0.0)
    if y0 >= 0:
        return BoundStateInfo(exists=False, E_b=None, Z=None, y0=y0)

    def h(varpi):
        return y_value(sd, omega0, varpi) - varpi

    # h is strictly decreasing; h(0^-) = y0 < 0, h -> +inf as varpi -> -inf
    lo = -(omega0 + j_over_omega_integral(sd) + 1.0)
    while h(lo) < 0:
        lo *= 2.0
        if abs(lo) > 1e3 * omega0:
            raise BracketError(f"no sign change down to varpi = {lo}")
    hi = 0.0
    while hi - lo > 1e-15 * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        hm = h(mid)
        if abs(hm) < ROOT_TOL:
            lo = hi = mid
            break
        if hm > 0:
            lo = mid
        else:
            hi = mid
    E_b = 0.5 * (lo + hi)
    return BoundStateInfo(exists=True, E_b=E_b, Z=_residue_weight(sd, E_b), y0=y0)


def asymptotic_u(info: BoundStateInfo, t) -> complex:
    """Long-time amplitude Z e^{-i E_b t}; the band contribution has decayed."""
    if not info.exists:
        raise RuntimeError("asymptotic amplitude requires a bound state")
    t = np.asarray(t, dtype=float)
    out = info.Z * np.exp(-1j * info.E_b * t)
    return out if out.ndim else complex(out)


def energy_spectrum(
    sd_template: SpectralDensity,
    omega0: float,
    eta_grid,
    n_modes: int = 400,
) -> list[SpectrumSlice]:
    """Single-excitation eigenvalues of the discretized total Hamiltonian for
    each coupling on the grid (the data behind an energy-spectrum panel)."""
    if n_modes < 100:
        raise ValueError("n_modes must be >= 100")
    slices = []
    for eta in np.atleast_1d(eta_grid):
        sd = SpectralDensity(float(eta), sd_template.s, sd_template.omega_c)
        if eta == 0:
            omegas = (np.arange(n_modes) + 0.5) * (tail_cutoff(sd_template) / n_modes)
            evals = np.sort(np.concatenate([[omega0], omegas]))
            slices.append(SpectrumSlice(eta=0.0, band=evals, bound_branch=None))
            continue
        omega_max = tail_cutoff(sd)
        d_omega = omega_max / n_modes
        omegas = (np.arange(n_modes) + 0.5) * d_omega
        g = np.sqrt(j_omega(sd, omegas) * d_omega)
        h = np.zeros((n_modes + 1, n_modes + 1))
        h[0, 0] = omega0
        h[0, 1:] = g
        h[1:, 0] = g
        h[np.arange(1, n_modes + 1), np.arange(1, n_modes + 1)] = omegas
        evals = eigh(h, eigvals_only=True)
        info = find_bound_state(sd, omega0)
        bound = None
        if info.exists:
            bound = float(evals[0])
            if abs(bound - info.E_b) > 5.0 * d_omega:
                raise RuntimeError(
                    f"discrete bound level {bound:.6f} off the continuum root "
                    f"{info.E_b:.6f} by more than 5*d_omega"
                )
            evals = evals[1:]
        slices.append(SpectrumSlice(eta=float(eta), band=evals, bound_branch=bound))
    return slices
