"""Figure rendering for the report commands.

Uses the object-oriented Agg canvas directly so no pyplot state leaks between
calls, and strips the Software metadata so PNG bytes are reproducible.
"""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 9,
}
PNG_METADATA = {"Software": None}


def _figure(width=5.0, height=3.6) -> Figure:
    fig = Figure(figsize=(width, height), dpi=120, layout="constrained")
    FigureCanvasAgg(fig)
    return fig


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    fig.savefig(path, format="png", metadata=PNG_METADATA)
    return path


def plot_husimi(grid, path) -> Path:
    """Heat map of Q over the sampled rectangle with the ridge marked."""
    with matplotlib.rc_context(STYLE):
        fig = _figure()
        ax = fig.add_subplot()
        extent = (grid.re_values[0], grid.re_values[-1], grid.im_values[0], grid.im_values[-1])
        im = ax.imshow(grid.values, origin="lower", extent=extent, aspect="auto", cmap="viridis")
        ax.axvline(grid.x_param / math.sqrt(2), color="w", lw=0.8, ls="--")
        ax.set_xlabel(r"Re $\beta$")
        ax.set_ylabel(r"Im $\beta$")
        ax.set_title(f"Husimi Q of |x>, x = {grid.x_param:g}")
        fig.colorbar(im, ax=ax, label="Q")
        return _save(fig, path)


def plot_limits(x: float, yuen_rows, caves_rows, path) -> Path:
    """Centers and fidelities of both families against r."""
    with matplotlib.rc_context(STYLE):
        fig = _figure(7.0, 3.2)
        ax_c, ax_f = fig.subplots(1, 2)
        for rows, label, marker in ((yuen_rows, "Yuen", "o"), (caves_rows, "Caves", "s")):
            rs = [row.r for row in rows]
            ax_c.plot(rs, [row.center_x for row in rows], marker=marker, label=label)
            ax_f.plot(rs, [row.fidelity_to_target for row in rows], marker=marker, label=label)
        ax_c.set_xlabel("r")
        ax_c.set_ylabel(r"$\langle \hat{x} \rangle$")
        ax_f.set_xlabel("r")
        ax_f.set_ylabel("fidelity to target")
        ax_f.set_ylim(0, 1.02)
        ax_c.legend(frameon=False)
        fig.suptitle(f"x = {x:g}")
        return _save(fig, path)
