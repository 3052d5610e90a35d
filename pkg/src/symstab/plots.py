"""Non-interactive figure rendering for CLI reports.

Everything draws through the Agg backend straight to PNG files; no
window system is touched and no figure object leaks between calls.
Functions return the path they wrote so report code can list artifacts.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["line_plot", "field_heatmap", "convergence_plot"]

_DPI = 130


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return str(path)


def line_plot(x, curves, path, xlabel="", ylabel="", title="", logx=False, logy=False,
              hline=None):
    """Plot one or more labeled curves over a shared abscissa.

    curves: mapping label -> array (or a bare array for a single
    anonymous curve).  hline, when given, draws a dashed reference line.
    """
    if not isinstance(curves, dict):
        curves = {"": curves}
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, y in curves.items():
        ax.plot(np.asarray(x), np.asarray(y), marker=".", lw=1.2, ms=4, label=label or None)
    if hline is not None:
        ax.axhline(hline, color="k", ls="--", lw=0.8)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if any(curves):
        ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return _finish(fig, path)


def field_heatmap(field, path, title="", regions=None, centers=None):
    """Render a disk field with exterior nodes masked out.

    regions: iterable with center_x/center_y/inner_radius/outer_radius
    attributes; each is drawn as its bounding annulus.  centers: extra
    (x, y) markers.
    """
    vals = np.ma.masked_where(field.mask == 2, field.values)
    extent = (-field.R, field.R, -field.R, field.R)
    fig, ax = plt.subplots(figsize=(5.4, 4.6))
    im = ax.imshow(vals.T, origin="lower", extent=extent, cmap="viridis",
                   interpolation="nearest")
    fig.colorbar(im, ax=ax, shrink=0.85)
    theta = np.linspace(0.0, 2.0 * np.pi, 181)
    ax.plot(field.R * np.cos(theta), field.R * np.sin(theta), "k-", lw=0.8)
    for reg in regions or ():
        cx, cy = reg.center
        for rad, style in ((reg.inner_radius, ":"), (reg.outer_radius, "--")):
            if rad > 0:
                ax.plot(cx + rad * np.cos(theta), cy + rad * np.sin(theta),
                        "w" + style, lw=1.0)
        ax.plot([cx], [cy], "w+", ms=8)
    for cx, cy in centers or ():
        ax.plot([cx], [cy], "rx", ms=6)
    ax.set_aspect("equal")
    ax.set_title(title)
    return _finish(fig, path)


def convergence_plot(hs, errors, path, title="", fitted_order=None):
    """log-log error-vs-spacing plot with a first-order guide line."""
    hs = np.asarray(hs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.loglog(hs, np.maximum(errors, 1e-18), "o-", lw=1.2)
    guide = errors[0] * hs / hs[0]
    ax.loglog(hs, guide, "k--", lw=0.8, label="order 1 guide")
    label = "error"
    if fitted_order is not None:
        label += " (fitted order %.2f)" % fitted_order
    ax.set_xlabel("grid spacing h")
    ax.set_ylabel(label)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)
