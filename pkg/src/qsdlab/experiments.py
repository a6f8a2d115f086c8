"""Named parameter sweeps behind each figure, persisted as CSV tables.

Every experiment writes a self-describing CSV: first line
`# config: key=value ...` (canonical key order), second line the column
header, then rows with floats printed as 9-significant-digit scientific
notation.  Failures never abort a sweep; the row is tagged in its `status`
column and the numeric cells are left as nan.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import bound_state, markov, qsl, spin_boson
from .kernel import solve_u
from .spectral import SpectralDensity, alpha0

__all__ = ["ExperimentConfig", "SweepResult", "ConfigError", "run_experiment", "EXPERIMENTS"]

EXPERIMENTS = ("fig1", "fig2", "fig3", "sm1", "sm2", "sm3", "sweep")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


def _grid(a: float, b: float, n: int) -> tuple[float, ...]:
    return tuple(float(x) for x in np.linspace(a, b, n))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    eta: float = 0.05
    s: float = 1.0
    omega_c: float = 10.0
    omega0: float = 1.0
    tau_max: float = 50.0
    dt: float = 0.01
    eta_grid: tuple[float, ...] = ()
    tau_grid: tuple[float, ...] = ()
    omega_c_grid: tuple[float, ...] = ()
    n_modes: int = 2000
    n_traj: int = 2000
    seed: int = 1
    jobs: int = 1
    out_path: str = ""

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment: unknown name {self.experiment!r}")
        for name in ("s", "omega_c", "omega0", "tau_max", "dt"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name}: must be positive")
        if self.eta < 0:
            raise ConfigError("eta: must be nonnegative")
        for name in ("n_modes", "n_traj", "seed", "jobs"):
            if getattr(self, name) < 1 and not (name == "seed" and self.seed >= 0):
                raise ConfigError(f"{name}: must be >= 1")
        for name in ("eta_grid", "tau_grid", "omega_c_grid"):
            g = getattr(self, name)
            if any(b <= a for a, b in zip(g, g[1:])):
                raise ConfigError(f"{name}: must be strictly increasing")


@dataclass(frozen=True)
class SweepResult:
    columns: tuple[str, ...]
    rows: list[tuple]
    n_failed: int = 0


def _defaults(experiment: str) -> dict:
    base = {"experiment": experiment}
    if experiment == "fig1":
        base.update(tau_grid=_grid(0.5, 200.0, 400))
    elif experiment == "fig2":
        base.update(
            eta_grid=_grid(0.02, 0.3, 15), tau_grid=_grid(2.0, 50.0, 25), tau_max=50.0
        )
    elif experiment == "fig3":
        base.update(
            eta=0.2,
            tau_max=800.0,
            dt=0.02,
            eta_grid=_grid(0.12, 0.3, 7),
            omega_c_grid=_grid(5.0, 20.0, 7),
        )
    elif experiment == "sm1":
        base.update(eta=0.1, omega_c=13.0, tau_grid=_grid(0.5, 100.0, 200))
    elif experiment == "sm2":
        base.update(s=0.6, omega_c=30.0, dt=0.05, tau_grid=_grid(10.0, 1000.0, 25))
    elif experiment == "sm3":
        base.update(
            s=0.6, omega_c=30.0, dt=0.05, tau_max=1000.0, eta_grid=_grid(0.05, 0.28, 8)
        )
    elif experiment == "sweep":
        base.update(eta_grid=_grid(0.02, 0.2, 4), tau_grid=_grid(5.0, 50.0, 10))
    return base


def make_config(experiment: str, **overrides) -> ExperimentConfig:
    cfg = _defaults(experiment)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**cfg)


# --- CSV serialization -------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return f"{float(value):.8e}"


def config_line(cfg: ExperimentConfig) -> str:
    parts = []
    for f in fields(cfg):
        if f.name in ("jobs", "out_path"):  # execution detail, not data identity
            continue
        v = getattr(cfg, f.name)
        if isinstance(v, tuple):
            v = ",".join(_fmt(x) for x in v)
        else:
            v = _fmt(v)
        parts.append(f"{f.name}={v}")
    return "# config: " + " ".join(parts)


def write_csv(path: str, cfg: ExperimentConfig, result: SweepResult) -> None:
    lines = [config_line(cfg), ",".join(result.columns)]
    for row in result.rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# --- per-point workers (module level so a process pool can pickle them) ------

_NAN = float("nan")


def _exact_point(args):
    """Reports at each tau for one (eta, omega_c) point, plus bound-state data."""
    eta, s, omega_c, omega0, taus, t_max, dt = args
    try:
        sd = SpectralDensity(eta, s, omega_c)
        grid = solve_u(sd, omega0, t_max, dt)
        reps = qsl.report_series(grid, [grid.index_of(t) for t in taus])
        info = bound_state.find_bound_state(sd, omega0) if eta > 0 else None
        return reps, info, ""
    except Exception as exc:  # tagged, never fatal to the sweep
        return None, None, f"error:{type(exc).__name__}"


def _sbm_point(args):
    eta, s, omega_c, delta, taus, dt = args
    try:
        sd = SpectralDensity(eta, s, omega_c)
        p = spin_boson.solve_theta(sd, delta)
        reps = spin_boson.sbm_qsl_pipeline(sd, delta, taus, dt)
        info = spin_boson.sbm_bound_state(sd, p)
        c_tilde = spin_boson.sbm_asymptotic_speed(sd, p)
        return (p.theta, reps, info, c_tilde, "")
    except Exception as exc:
        return (None, None, None, None, f"error:{type(exc).__name__}")


def _map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --- experiments -------------------------------------------------------------

def _bound_cells(info):
    if info is None:
        return (0, _NAN, _NAN)
    return (info.exists, info.E_b if info.exists else _NAN, info.Z if info.exists else _NAN)


def _run_fig1(cfg: ExperimentConfig) -> SweepResult:
    sd = SpectralDensity(cfg.eta, cfg.s, cfg.omega_c)
    mp = markov.markov_params(sd, cfg.omega0)
    asym = markov.qsl_markov_asymptote(mp)
    rows = []
    for tau in cfg.tau_grid:
        rows.append(
            (
                tau,
                qsl.ideal_ratio(cfg.omega0, tau),
                cfg.omega0 / 2.0,
                markov.bures_angle_markov(mp, tau) / (markov.vbar_markov(mp, tau) * tau),
                markov.vbar_markov(mp, tau),
                asym,
                "ok",
            )
        )
    return SweepResult(
        ("tau", "ratio_ideal", "vbar_ideal", "ratio_bma", "vbar_bma", "ratio_asymptote", "status"),
        rows,
    )


_EXACT_COLS = (
    "vbar",
    "ratio",
    "L_B",
    "ell",
    "L_B_red",
    "ell_red",
    "ratio_red",
    "ratio_hybrid",
)


def _report_cells(r: qsl.QslReport):
    return (r.vbar, r.ratio, r.L_B, r.ell, r.L_B_red, r.ell_red, r.ratio_red, r.ratio_hybrid)


def _run_fig2(cfg: ExperimentConfig) -> SweepResult:
    taus = cfg.tau_grid
    args = [
        (eta, cfg.s, cfg.omega_c, cfg.omega0, taus, cfg.tau_max, cfg.dt)
        for eta in cfg.eta_grid
    ]
    rows, failed = [], 0
    for eta, (reps, info, status) in zip(cfg.eta_grid, _map(_exact_point, args, cfg.jobs)):
        for k, tau in enumerate(taus):
            if reps is None:
                rows.append((eta, tau) + (_NAN,) * 8 + _bound_cells(None) + (status,))
                failed += 1
            else:
                rows.append(
                    (eta, tau) + _report_cells(reps[k]) + _bound_cells(info) + ("ok",)
                )
    cols = ("eta", "tau") + _EXACT_COLS + ("exists", "E_b", "Z", "status")
    return SweepResult(cols, rows, failed)


def _run_fig3(cfg: ExperimentConfig) -> SweepResult:
    tau = cfg.tau_max
    args = [
        (eta, cfg.s, cfg.omega_c, cfg.omega0, (tau,), tau, cfg.dt) for eta in cfg.eta_grid
    ] + [
        (cfg.eta, cfg.s, wc, cfg.omega0, (tau,), tau, cfg.dt) for wc in cfg.omega_c_grid
    ]
    rows, failed = [], 0
    results = _map(_exact_point, args, cfg.jobs)
    axes = [("eta", eta, cfg.omega_c) for eta in cfg.eta_grid] + [
        ("omega_c", wc, cfg.eta) for wc in cfg.omega_c_grid
    ]
    for (axis, value, other), (reps, info, status) in zip(axes, results):
        eta = value if axis == "eta" else other
        wc = value if axis == "omega_c" else other
        c_analytic = _NAN
        if info is not None and info.exists:
            sd = SpectralDensity(eta, cfg.s, wc)
            c_analytic = qsl.asymptotic_speed(info, alpha0(sd), cfg.omega0)
        if reps is None:
            rows.append((axis, value) + (_NAN,) * 8 + _bound_cells(info) + (c_analytic, status))
            failed += 1
        else:
            rows.append(
                (axis, value)
                + _report_cells(reps[0])
                + _bound_cells(info)
                + (c_analytic, "ok")
            )
    cols = ("axis", "value") + _EXACT_COLS + ("exists", "E_b", "Z", "C_analytic", "status")
    return SweepResult(cols, rows, failed)


def _run_sm1(cfg: ExperimentConfig) -> SweepResult:
    sd = SpectralDensity(cfg.eta, cfg.s, cfg.omega_c)
    mp = markov.markov_params(sd, cfg.omega0)
    taus = cfg.tau_grid
    reps, info, status = _exact_point(
        (cfg.eta, cfg.s, cfg.omega_c, cfg.omega0, taus, taus[-1], cfg.dt)
    )
    rows, failed = [], 0
    for k, tau in enumerate(taus):
        bma_vbar = markov.vbar_markov(mp, tau)
        bma_ratio = markov.bures_angle_markov(mp, tau) / (bma_vbar * tau)
        if reps is None:
            rows.append((tau, _NAN, _NAN, bma_vbar, bma_ratio, status))
            failed += 1
        else:
            rows.append((tau, reps[k].vbar, reps[k].ratio, bma_vbar, bma_ratio, "ok"))
    return SweepResult(
        ("tau", "vbar_exact", "ratio_exact", "vbar_bma", "ratio_bma", "status"), rows, failed
    )


def _run_sm2(cfg: ExperimentConfig) -> SweepResult:
    rows, failed = [], 0
    etas = cfg.eta_grid or (0.1, 0.25)
    args = [(eta, cfg.s, cfg.omega_c, cfg.omega0, cfg.tau_grid, cfg.dt) for eta in etas]
    for eta, (theta, reps, info, c_tilde, status) in zip(
        etas, _map(_sbm_point, args, cfg.jobs)
    ):
        for k, tau in enumerate(cfg.tau_grid):
            if reps is None:
                rows.append((eta, tau, _NAN) + (_NAN,) * 8 + _bound_cells(None) + (_NAN, status))
                failed += 1
            else:
                rows.append(
                    (eta, tau, theta)
                    + _report_cells(reps[k])
                    + _bound_cells(info)
                    + (c_tilde, "ok")
                )
    cols = ("eta", "tau", "theta") + _EXACT_COLS + ("exists", "E_b", "Z", "C_analytic", "status")
    return SweepResult(cols, rows, failed)


def _run_sm3(cfg: ExperimentConfig) -> SweepResult:
    rows, failed = [], 0
    args = [
        (eta, cfg.s, cfg.omega_c, cfg.omega0, (cfg.tau_max,), cfg.dt)
        for eta in cfg.eta_grid
    ]
    for eta, (theta, reps, info, c_tilde, status) in zip(
        cfg.eta_grid, _map(_sbm_point, args, cfg.jobs)
    ):
        if reps is None:
            rows.append((eta, _NAN) + (_NAN,) * 8 + _bound_cells(None) + (_NAN, _NAN, status))
            failed += 1
        else:
            rows.append(
                (eta, theta)
                + _report_cells(reps[0])
                + _bound_cells(info)
                + (c_tilde, info.y0, "ok")
            )
    cols = ("eta", "theta") + _EXACT_COLS + ("exists", "E_b", "Z", "C_analytic", "y0", "status")
    return SweepResult(cols, rows, failed)


def _run_sweep(cfg: ExperimentConfig) -> SweepResult:
    taus = cfg.tau_grid
    args = [
        (eta, cfg.s, cfg.omega_c, cfg.omega0, taus, taus[-1], cfg.dt)
        for eta in cfg.eta_grid
    ]
    rows, failed = [], 0
    for eta, (reps, info, status) in zip(cfg.eta_grid, _map(_exact_point, args, cfg.jobs)):
        for k, tau in enumerate(taus):
            if reps is None:
                rows.append((eta, tau) + (_NAN,) * 8 + _bound_cells(info) + (status,))
                failed += 1
            else:
                rows.append(
                    (eta, tau) + _report_cells(reps[k]) + _bound_cells(info) + ("ok",)
                )
    cols = ("eta", "tau") + _EXACT_COLS + ("exists", "E_b", "Z", "status")
    return SweepResult(cols, rows, failed)


_RUNNERS = {
    "fig1": _run_fig1,
    "fig2": _run_fig2,
    "fig3": _run_fig3,
    "sm1": _run_sm1,
    "sm2": _run_sm2,
    "sm3": _run_sm3,
    "sweep": _run_sweep,
}


def run_experiment(cfg: ExperimentConfig) -> SweepResult:
    """Run the named sweep; writes cfg.out_path when set."""
    if cfg.experiment in ("fig1", "sm1", "sm2", "sweep") and not cfg.tau_grid:
        raise ConfigError("tau_grid: required for this experiment")
    if cfg.experiment in ("fig2", "fig3", "sm3", "sweep") and not cfg.eta_grid:
        raise ConfigError("eta_grid: required for this experiment")
    result = _RUNNERS[cfg.experiment](cfg)
    if cfg.out_path:
        write_csv(cfg.out_path, cfg, result)
        if cfg.experiment == "fig2":
            stem, dot, ext = cfg.out_path.rpartition(".")
            write_csv(
                (stem + "_spectrum." + ext) if dot else cfg.out_path + "_spectrum",
                cfg,
                spectrum_slices(cfg),
            )
    return result


def spectrum_slices(cfg: ExperimentConfig) -> SweepResult:
    """Single-excitation energy levels versus coupling (fig2 side panel)."""
    template = SpectralDensity(max(cfg.eta_grid[-1], 0.01), cfg.s, cfg.omega_c)
    rows = []
    for sl in bound_state.energy_spectrum(
        template, cfg.omega0, cfg.eta_grid, n_modes=400
    ):
        if sl.bound_branch is not None:
            rows.append((sl.eta, -1, sl.bound_branch, 1, "ok"))
        for k, e in enumerate(sl.band):
            rows.append((sl.eta, k, float(e), 0, "ok"))
    return SweepResult(("eta", "level", "energy", "is_bound", "status"), rows)
