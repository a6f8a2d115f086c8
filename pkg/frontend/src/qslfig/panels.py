"""Panel layouts over parsed sweep tables.

Four panel types:
  lines      time scans (ratio and average-speed curves, analytic overlays)
  heatmap    (eta, tau) maps of average speed and speed-limit ratio
  spectrum   single-excitation energy levels versus coupling
  dual-scan  steady-state scans with speed on the left axis, ratio on the right

The renderer draws only what the CSV provides; a dashed guide marks the
critical coupling eta = 0.1 on coupling axes.
"""

from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure

from .reader import SchemaError, SweepTable, require_columns

__all__ = ["PANELS", "render_panel"]

CRITICAL_ETA = 0.1

_LINE_COLUMN_SETS = {
    "fig1": ("tau", "ratio_ideal", "vbar_ideal", "ratio_bma", "vbar_bma", "ratio_asymptote"),
    "sm1": ("tau", "vbar_exact", "ratio_exact", "vbar_bma", "ratio_bma"),
    "sm2": ("eta", "tau", "vbar", "ratio", "C_analytic"),
    "sweep": ("eta", "tau", "vbar", "ratio"),
}

_STYLE = {"ratio": "-", "vbar": "--"}


def _ratio_vbar_columns(table: SweepTable):
    ratios = [c for c in table.columns if c.startswith("ratio")]
    vbars = [c for c in table.columns if c.startswith("vbar")]
    return ratios, vbars


def panel_lines(tables: list[SweepTable]) -> Figure:
    fig = Figure(figsize=(8.0, 3.2))
    ax_r, ax_v = fig.subplots(1, 2)
    for table in tables:
        expected = _LINE_COLUMN_SETS.get(table.experiment)
        if expected is None:
            raise SchemaError(
                f"{table.path}: experiment {table.experiment!r} has no line-panel layout"
            )
        require_columns(table, expected)
        ok = table.ok_mask()
        tau = table.column("tau")[ok]
        ratios, vbars = _ratio_vbar_columns(table)
        group_col = table.column("eta")[ok] if "eta" in table.columns else None
        groups = [None] if group_col is None else sorted(set(group_col))
        for g in groups:
            sel = slice(None) if g is None else group_col == g
            suffix = "" if g is None else f" (eta={g:g})"
            for name in ratios:
                if name == "ratio_asymptote":
                    continue
                ax_r.plot(tau[sel], table.column(name)[ok][sel], label=name + suffix)
            for name in vbars:
                ax_v.plot(tau[sel], table.column(name)[ok][sel], label=name + suffix)
        if "ratio_asymptote" in table.columns:
            ax_r.axhline(
                table.column("ratio_asymptote")[ok][0],
                color="k",
                linestyle=":",
                label="long-time asymptote",
            )
        if "C_analytic" in table.columns:
            for g in groups:
                sel = slice(None) if g is None else group_col == g
                c = table.column("C_analytic")[ok][sel]
                if np.isfinite(c).any():
                    ax_v.axhline(c[np.isfinite(c)][0], color="k", linestyle=":")
    ax_r.set_xlabel("tau")
    ax_r.set_ylabel("QSL time ratio")
    ax_v.set_xlabel("tau")
    ax_v.set_ylabel("average speed")
    for ax in (ax_r, ax_v):
        ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def panel_heatmap(table: SweepTable) -> Figure:
    require_columns(table, ("eta", "tau", "vbar", "ratio"))
    ok = table.ok_mask()
    etas = np.array(sorted(set(table.column("eta")[ok])))
    taus = np.array(sorted(set(table.column("tau")[ok])))
    fig = Figure(figsize=(8.0, 3.2))
    axes = fig.subplots(1, 2)
    for ax, name in zip(axes, ("vbar", "ratio")):
        grid = np.full((len(etas), len(taus)), np.nan)
        e, t, v = (table.column(c)[ok] for c in ("eta", "tau", name))
        for ei, ti, vi in zip(e, t, v):
            grid[np.searchsorted(etas, ei), np.searchsorted(taus, ti)] = vi
        im = ax.pcolormesh(taus, etas, grid, shading="nearest")
        fig.colorbar(im, ax=ax, label=name)
        if etas.min() <= CRITICAL_ETA <= etas.max():
            ax.axhline(CRITICAL_ETA, color="w", linestyle="--", linewidth=1.0)
        ax.set_xlabel("tau")
        ax.set_ylabel("eta")
    fig.tight_layout()
    return fig


def panel_spectrum(table: SweepTable) -> Figure:
    require_columns(table, ("eta", "level", "energy", "is_bound"))
    ok = table.ok_mask()
    eta = table.column("eta")[ok]
    energy = table.column("energy")[ok]
    bound = table.column("is_bound")[ok].astype(bool)
    fig = Figure(figsize=(4.2, 3.2))
    ax = fig.subplots()
    ax.plot(eta[~bound], energy[~bound], ".", color="0.7", markersize=1.5, label="band")
    if bound.any():
        ax.plot(eta[bound], energy[bound], "r.", markersize=4.0, label="bound level")
    ax.axvline(CRITICAL_ETA, color="k", linestyle="--", linewidth=1.0)
    ax.set_xlabel("eta")
    ax.set_ylabel("energy")
    ax.set_ylim(min(-1.0, energy.min() * 1.1), 3.0)
    ax.legend(fontsize=7, loc="upper right")
    fig.tight_layout()
    return fig


def panel_dual_scan(table: SweepTable) -> Figure:
    require_columns(table, ("vbar", "ratio"))
    axis_names = ("value",) if "value" in table.columns else ("eta",)
    require_columns(table, axis_names)
    ok = table.ok_mask()
    if "axis" in table.columns:
        kinds = [k for k in dict.fromkeys(table.column("axis")[ok])]
    else:
        kinds = [axis_names[0]]
    fig = Figure(figsize=(4.2 * len(kinds), 3.2))
    axes = np.atleast_1d(fig.subplots(1, len(kinds)))
    for ax, kind in zip(axes, kinds):
        if "axis" in table.columns:
            sel = table.column("axis")[ok] == kind
            x = table.column("value")[ok][sel]
        else:
            sel = np.ones(ok.sum(), dtype=bool)
            x = table.column(axis_names[0])[ok]
        ax.plot(x, table.column("vbar")[ok][sel], "rs-", label="vbar")
        if "C_analytic" in table.columns:
            c = table.column("C_analytic")[ok][sel]
            ax.plot(x[np.isfinite(c)], c[np.isfinite(c)], "k:", label="analytic plateau")
        twin = ax.twinx()
        twin.plot(x, table.column("ratio")[ok][sel], "bo--", label="ratio")
        twin.set_ylabel("QSL time ratio")
        if kind == "eta" and x.min() <= CRITICAL_ETA <= x.max():
            ax.axvline(CRITICAL_ETA, color="k", linestyle="--", linewidth=1.0)
        ax.set_xlabel(kind)
        ax.set_ylabel("average speed")
        ax.legend(fontsize=7, loc="upper left")
        twin.legend(fontsize=7, loc="upper right")
    fig.tight_layout()
    return fig


PANELS = {
    "lines": panel_lines,
    "heatmap": panel_heatmap,
    "spectrum": panel_spectrum,
    "dual-scan": panel_dual_scan,
}


def render_panel(tables: list[SweepTable], panel: str) -> Figure:
    if panel not in PANELS:
        raise SchemaError(f"unknown panel type {panel!r}; have {', '.join(PANELS)}")
    if panel == "lines":
        return panel_lines(tables)
    if len(tables) != 1:
        raise SchemaError(f"panel {panel!r} takes exactly one input table")
    return PANELS[panel](tables[0])
