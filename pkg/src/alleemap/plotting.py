"""Figure rendering for grids, bifurcation diagrams and phase portraits.

Figures are inspection aids written next to the data files.  SVG output is
made reproducible by pinning the hash salt and dropping the date metadata.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

plt.rcParams["svg.hashsalt"] = "alleemap"
plt.rcParams["font.size"] = 9

#: Cell colours for stability grids.
CLASS_COLORS = {
    "sink": "green",
    "source": "red",
    "saddle": "blue",
    "non-hyperbolic": "black",
    "absent": "white",
}
CLASS_ORDER = list(CLASS_COLORS)

DEFAULT_PANEL_SIZE = 3.6
DEFAULT_MARKER_SIZE = 0.4
EPLUS_COLOR = "red"
CRITICAL_COLOR = "0.4"

PARAM_LABELS = {"s": "s", "w": "w", "alpha": r"$\alpha$", "beta": r"$\beta$", "theta": r"$\theta$"}


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if path.suffix.lower() == ".svg" else None
    fig.savefig(path, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
    return path


def _label(name):
    return PARAM_LABELS.get(name, name)


def _draw_grid(ax, grid, title=None):
    codes = np.vectorize(CLASS_ORDER.index)(grid.cells)
    cmap = ListedColormap([CLASS_COLORS[k] for k in CLASS_ORDER])
    ax.imshow(codes, origin="lower", aspect="auto", interpolation="nearest",
              cmap=cmap, vmin=-0.5, vmax=len(CLASS_ORDER) - 0.5,
              extent=(grid.x_axis.lo, grid.x_axis.hi, grid.y_axis.lo, grid.y_axis.hi))
    ax.set_xlabel(_label(grid.x_axis.param))
    ax.set_ylabel(_label(grid.y_axis.param))
    if title:
        ax.set_title(title)


def plot_grids(grids, path, titles=None):
    """One heatmap panel per grid, with a shared legend of the classes present."""
    titles = titles or [None] * len(grids)
    fig, axes = plt.subplots(1, len(grids), squeeze=False,
                             figsize=(DEFAULT_PANEL_SIZE * len(grids), DEFAULT_PANEL_SIZE))
    present = set()
    for ax, grid, title in zip(axes[0], grids, titles):
        _draw_grid(ax, grid, title)
        present.update(np.unique(grid.cells))
    handles = [plt.Rectangle((0, 0), 1, 1, facecolor=CLASS_COLORS[k], edgecolor="k")
               for k in CLASS_ORDER if k in present]
    fig.legend(handles, [k for k in CLASS_ORDER if k in present],
               loc="lower center", ncol=len(handles), frameon=False,
               bbox_to_anchor=(0.5, -0.08))
    return _save(fig, path)


def plot_diagram(diagram, path, critical=None, threshold=None, portraits=(), eplus=()):
    """Bifurcation diagram (x and y against the swept parameter) plus optional portraits.

    ``portraits`` is a sequence of ``(label, states)`` pairs; ``eplus`` the
    matching coexistence equilibria (or None) drawn as red dots.
    """
    ncols = 2 + len(portraits)
    fig, axes = plt.subplots(1, ncols, squeeze=False,
                             figsize=(DEFAULT_PANEL_SIZE * ncols, DEFAULT_PANEL_SIZE))
    axes = axes[0]
    keep = diagram.samples.shape[1]
    vals = np.repeat(diagram.values, keep)
    for ax, comp, name in ((axes[0], 0, "x"), (axes[1], 1, "y")):
        ax.plot(vals, diagram.samples[:, :, comp].ravel(), ",", color="k",
                markersize=DEFAULT_MARKER_SIZE)
        ax.set_xlabel(_label(diagram.param))
        ax.set_ylabel(name)
        if critical is not None:
            ax.axvline(critical, color=CRITICAL_COLOR, lw=0.6, ls="--")
        if threshold is not None:
            ax.axvline(threshold, color=CRITICAL_COLOR, lw=0.6, ls=":")
    eplus = list(eplus) + [None] * (len(portraits) - len(eplus))
    for ax, (label, states), fp in zip(axes[2:], portraits, eplus):
        states = np.asarray(states)
        ax.plot(states[:, 0], states[:, 1], ".", color="k", markersize=1.0)
        if fp is not None:
            ax.plot([fp[0]], [fp[1]], "o", color=EPLUS_COLOR, markersize=3)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title(label)
    fig.tight_layout()
    return _save(fig, path)


def plot_orbit(states, path, eplus=None, title=None):
    fig, ax = plt.subplots(figsize=(DEFAULT_PANEL_SIZE, DEFAULT_PANEL_SIZE))
    states = np.asarray(states)
    ax.plot(states[:, 0], states[:, 1], ".", color="k", markersize=1.5)
    if eplus is not None:
        ax.plot([eplus[0]], [eplus[1]], "o", color=EPLUS_COLOR, markersize=3)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    return _save(fig, path)
