"""Executable acceptance suite: every release gate as a named check.

Each check returns one or more CheckResult lines (dotted sub-names) with the
measured value, the expected value, and the tolerance, so a failure is
diagnosable from the printed report alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import markov, qsl, spin_boson
from .bound_state import find_bound_state, y_value
from .kernel import convergence_order, solve_u
from .spectral import SpectralDensity, alpha0, alpha_closed
from .trajectories import (
    build_bath,
    evolve_single_excitation,
    run_ensemble,
    sample_noise,
)

__all__ = ["CheckResult", "CHECKS", "run_checks", "format_report"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    expected: float
    tol: float
    passed: bool


def _abs_check(name, measured, expected, tol):
    return CheckResult(name, float(measured), float(expected), tol, abs(measured - expected) <= tol)


def _upper_check(name, measured, bound):
    return CheckResult(name, float(measured), float(bound), bound, measured <= bound)


def check_ideal_limit():
    sd = SpectralDensity(1e-6, 1.0, 10.0)
    grid = solve_u(sd, 1.0, 20.0, 0.01)
    indices = [grid.index_of(t) for t in np.linspace(0.1, 20.0, 64)]
    taus = grid.t[indices]
    reps = qsl.report_series(grid, indices)
    ratio_err = max(abs(r.ratio - qsl.ideal_ratio(1.0, t)) for r, t in zip(reps, taus))
    vbar_err = max(abs(r.vbar - 0.5) for r in reps)
    return [
        _abs_check("ideal_limit.ratio", ratio_err, 0.0, 1e-3),
        _abs_check("ideal_limit.vbar", vbar_err, 0.0, 1e-4),
    ]


def check_markov_asymptote():
    sd = SpectralDensity(0.05, 1.0, 10.0)
    mp = markov.markov_params(sd, 1.0)
    asym = markov.qsl_markov_asymptote(mp)
    tau = 200.0
    ratio = markov.bures_angle_markov(mp, tau) / (markov.vbar_markov(mp, tau) * tau)
    closed_err = max(
        abs(
            markov.vbar_markov(mp, t)
            - mp.A * (1.0 - np.exp(-mp.kappa * t)) / (mp.kappa * t)
        )
        for t in (0.5, 5.0, 50.0, 200.0)
    )
    return [
        _abs_check("markov_asymptote.ratio", ratio, asym, 0.01 * asym),
        _abs_check("markov_asymptote.vbar_closed_form", closed_err, 0.0, 1e-9),
    ]


def check_bound_threshold():
    def y0(eta):
        return y_value(SpectralDensity(eta, 1.0, 10.0), 1.0, 0.0)

    root = brentq(y0, 0.02, 0.5, xtol=1e-12)
    below = find_bound_state(SpectralDensity(0.0999, 1.0, 10.0), 1.0).exists
    above = find_bound_state(SpectralDensity(0.1001, 1.0, 10.0), 1.0).exists
    return [
        _abs_check("bound_threshold.eta_root", root, 0.1, 1e-6),
        CheckResult("bound_threshold.flip", float(above and not below), 1.0, 0.0, above and not below),
    ]


def check_bound_asymptotics():
    sd = SpectralDensity(0.2, 1.0, 10.0)
    info = find_bound_state(sd, 1.0)
    grid = solve_u(sd, 1.0, 800.0, 0.02)
    taus = np.linspace(200.0, 800.0, 13)
    reps = qsl.report_series(grid, [grid.index_of(t) for t in taus])
    c = qsl.asymptotic_speed(info, alpha0(sd), 1.0)
    slope = np.polyfit(np.log(taus), np.log([r.ratio for r in reps]), 1)[0]
    return [
        _abs_check("bound_asymptotics.u_magnitude", abs(grid.u[-1]), info.Z, 0.02 * info.Z),
        _abs_check("bound_asymptotics.vbar_plateau", reps[-1].vbar, c, 0.05 * c),
        _abs_check("bound_asymptotics.loglog_slope", slope, -1.0, 0.1),
    ]


def check_no_bound_regime():
    sd = SpectralDensity(0.05, 1.0, 10.0)
    grid = solve_u(sd, 1.0, 800.0, 0.02)
    rep = qsl.report(grid)
    asym = markov.qsl_markov_asymptote(markov.markov_params(sd, 1.0))
    return [
        _upper_check("no_bound_regime.vbar_decay", rep.vbar, 0.02 * 0.5),
        _abs_check("no_bound_regime.ratio_vs_markov", rep.ratio, asym, 0.25 * asym),
    ]


def check_oracle_discrete_bath():
    sd = SpectralDensity(0.05, 1.0, 10.0)
    grid = solve_u(sd, 1.0, 50.0, 0.01)
    bath = build_bath(sd, 2000, 50.0)
    c_e = evolve_single_excitation(bath, 1.0, 50.0, 0.01)
    amp_err = np.max(np.abs(c_e - grid.u))
    # total-state overlap with the half-excited initial state
    angle_total = np.arccos(abs(1.0 + c_e[-1]) / 2.0)
    angle_u = qsl.bures_angle(grid.u[-1])
    return [
        _abs_check("oracle_discrete_bath.amplitude", amp_err, 0.0, 1e-3),
        _abs_check("oracle_discrete_bath.bures_angle", angle_total, angle_u, 1e-3),
    ]


def check_oracle_stochastic():
    sd = SpectralDensity(0.05, 1.0, 10.0)
    grid = solve_u(sd, 1.0, 20.0, 0.01)
    bath = build_bath(sd, 2000, 20.0)
    n = 10_000
    rho = run_ensemble(bath, 1.0, grid, n_traj=n, seed=7)
    tol = 5.0 / np.sqrt(n)
    idx = [grid.index_of(t) for t in (5.0, 10.0, 20.0)]
    ee_err = max(abs(rho["rho_ee"][i] - abs(grid.u[i]) ** 2 / 2.0) for i in idx)
    eg_err = max(abs(rho["rho_eg"][i] - grid.u[i] / 2.0) for i in idx)
    # covariance of the driving noise against the bath correlation, 5 sigma
    m = 2000
    samples = np.stack(
        [sample_noise(bath, grid.t[:: len(grid.t) // 8], 7, i).z_bar_t for i in range(m)]
    )
    worst = 0.0
    ts = grid.t[:: len(grid.t) // 8]
    for a in (0, 3, 6):
        for b in (0, 2):
            prods = np.conj(samples[:, a]) * samples[:, b]
            est = np.mean(prods)
            sigma = np.std(prods) / np.sqrt(m)
            dev = abs(est - alpha_closed(sd, ts[a] - ts[b])) / sigma
            worst = max(worst, dev)
    return [
        _abs_check("oracle_stochastic.rho_ee", ee_err, 0.0, tol),
        _abs_check("oracle_stochastic.rho_eg", eg_err, 0.0, tol),
        _upper_check("oracle_stochastic.noise_covariance_sigma", worst, 5.0),
    ]


def check_reduced_hierarchy():
    from .experiments import make_config, run_experiment

    res = run_experiment(make_config("fig2"))
    cols = {c: k for k, c in enumerate(res.columns)}
    worst = -np.inf
    ok = True
    for row in res.rows:
        if row[cols["status"]] != "ok":
            ok = False
            continue
        gaps = (
            row[cols["ell"]] - row[cols["ell_red"]],
            row[cols["L_B"]] - row[cols["L_B_red"]],
            row[cols["ratio_hybrid"]] - max(row[cols["ratio"]], row[cols["ratio_red"]]),
        )
        worst = max(worst, -min(gaps))
    return [CheckResult("reduced_hierarchy.slack", float(worst), 0.0, 1e-9, ok and worst <= 1e-9)]


def check_spin_boson():
    out = []
    for eta, has_bound in ((0.25, True), (0.1, False)):
        sd = SpectralDensity(eta, 0.6, 30.0)
        p = spin_boson.solve_theta(sd, 1.0)
        residual = p.theta - np.exp(
            -0.5 * spin_boson._displacement_integral(sd, p.effective_gap)
        )
        info = spin_boson.sbm_bound_state(sd, p)
        out.append(_abs_check(f"spin_boson.theta_residual_eta{eta}", abs(residual), 0.0, 1e-12))
        out.append(
            CheckResult(
                f"spin_boson.bound_exists_eta{eta}",
                float(info.exists),
                float(has_bound),
                0.0,
                info.exists == has_bound,
            )
        )
        rep = spin_boson.sbm_qsl_pipeline(sd, 1.0, [1000.0], dt=0.05)[-1]
        if has_bound:
            c = spin_boson.sbm_asymptotic_speed(sd, p)
            out.append(_abs_check(f"spin_boson.vbar_plateau_eta{eta}", rep.vbar, c, 0.05 * c))
        else:
            out.append(_upper_check(f"spin_boson.vbar_decay_eta{eta}", rep.vbar, 0.02 * 0.5))
    return out


def check_solver_convergence():
    out = []
    for label, sd in (
        ("ohmic", SpectralDensity(0.05, 1.0, 10.0)),
        ("subohmic", SpectralDensity(0.25, 0.6, 30.0)),
    ):
        p, _ = convergence_order(sd)
        out.append(CheckResult(f"solver_convergence.{label}", p, 2.0, 0.3, 1.7 <= p <= 2.3))
    return out


CHECKS = {
    "ideal_limit": check_ideal_limit,
    "markov_asymptote": check_markov_asymptote,
    "bound_threshold": check_bound_threshold,
    "bound_asymptotics": check_bound_asymptotics,
    "no_bound_regime": check_no_bound_regime,
    "oracle_discrete_bath": check_oracle_discrete_bath,
    "oracle_stochastic": check_oracle_stochastic,
    "reduced_hierarchy": check_reduced_hierarchy,
    "spin_boson": check_spin_boson,
    "solver_convergence": check_solver_convergence,
}


def run_checks(only: str | None = None) -> list[CheckResult]:
    names = [n for n in CHECKS if only is None or n == only or n.startswith(only)]
    if not names:
        raise KeyError(f"no check named {only!r}; have {', '.join(CHECKS)}")
    results = []
    for name in names:
        results.extend(CHECKS[name]())
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{tag} {r.name}: measured={r.measured:.6e} expected={r.expected:.6e} tol={r.tol:.1e}"
        )
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
