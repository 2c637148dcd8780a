"""Preconfigured recipes regenerating the data behind each reference figure.

Grid figures classify E1 or Es over the (s, w) plane; diagram figures sweep
one parameter through its Neimark-Sacker point, locate the critical value and
the extinction threshold, and record phase portraits at the listed values.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import bifurcation, report, scan
from .fixed_points import coexistence_point
from .model import Parameters, iterate_orbit

SW_PLANE = (("s", 0.0, 4.0), ("w", 0.0, 3.0))

GRID_FIGURES = {
    "fig1": ("E1", (8.4, 9.4)),
    "fig2": ("E1", (10.0,)),
    "fig3": ("Es", (8.4, 9.4)),
    "fig4": ("Es", (10.0,)),
}

# sweep range, NS bracket, extinction bracket (None: no collapse), portrait values
# ("ns" stands for the located critical value)
DIAGRAM_FIGURES = {
    "fig5": dict(param="s", sweep=(0.20, 0.27), ns=(0.20, 0.26), th=(0.25, 0.27),
                 portraits=(0.23, "ns", 0.25, 0.26)),
    "fig6": dict(param="w", sweep=(2.0, 2.5), ns=(2.0, 2.5), th=None,
                 portraits=(2.2, "ns", 2.35)),
    "fig7": dict(param="beta", sweep=(1.30, 1.36), ns=(1.30, 1.40), th=(1.35, 1.40),
                 portraits=(1.34, "ns", 1.35, 1.36)),
    "fig8": dict(param="alpha", sweep=(7.8, 8.1), ns=(8.0, 8.1), th=(7.8, 8.03),
                 portraits=(7.8, 8.03, "ns", 8.06)),
    "fig9": dict(param="theta", sweep=(0.120, 0.130), ns=(0.120, 0.130), th=(0.120, 0.1253),
                 portraits=(0.12, 0.1253, "ns", 0.126)),
}

PORTRAIT_STEPS = 3000
THRESHOLD_TOL = 1e-4


def _write(path: Path, command, config, columns, rows, summary, fmt):
    suffix = ".json" if fmt == "json" else ".csv"
    path = path.with_suffix(suffix)
    report.write(report.render(command, config, columns, rows, summary, fmt), path, None)
    return path


def grid_figure(fig: str, p: Parameters, options: dict, fmt: str, outdir: Path, config: dict):
    from .plotting import plot_grids

    target, alphas = GRID_FIGURES[fig]
    (xp, xlo, xhi), (yp, ylo, yhi) = SW_PLANE
    n = options["grid_n"]
    grids, summary = [], []
    for k, alpha in enumerate(alphas):
        q = p.with_value("alpha", alpha)
        grid = scan.plane_scan(q, scan.GridAxis(xp, xlo, xhi, n), scan.GridAxis(yp, ylo, yhi, n),
                               target)
        grids.append(grid)
        counts = ", ".join(f"{c}={v}" for c, v in sorted(grid.counts().items()))
        summary.append(f"{target} alpha={alpha}: {counts}")
    for k, grid in enumerate(grids):
        cols = [xp, yp, "class"]
        rows = [[float(xv), float(yv), grid.cells[i, j]]
                for i, yv in enumerate(grid.y_axis.centers)
                for j, xv in enumerate(grid.x_axis.centers)]
        name = fig + ("abcdef"[k] if len(grids) > 1 else "")
        _write(outdir / name, f"repro {fig}", {**config, "alpha": alphas[k]},
               cols, rows, [summary[k]], fmt)
    plot_grids(grids, outdir / f"{fig}.svg",
               [f"{target}, alpha={a}" for a in alphas])
    return summary


def eplus_figure(p: Parameters, options: dict, fmt: str, outdir: Path, config: dict):
    from .plotting import plot_grids

    n = options["grid_n"]
    planes = [
        (scan.GridAxis("alpha", 7.0, 10.0, n), scan.GridAxis("beta", 1.0, 2.0, n)),
        (scan.GridAxis("s", 0.0, 1.0, n), scan.GridAxis("w", 0.0, 3.0, n)),
    ]
    grids, summary = [], []
    for k, (xa, ya) in enumerate(planes):
        grid = scan.plane_scan(p, xa, ya, "Eplus")
        grids.append(grid)
        counts = ", ".join(f"{c}={v}" for c, v in sorted(grid.counts().items()))
        summary.append(f"Eplus {xa.param}-{ya.param}: {counts}")
        rows = [[float(xv), float(yv), grid.cells[i, j]]
                for i, yv in enumerate(ya.centers) for j, xv in enumerate(xa.centers)]
        _write(outdir / f"eplus{'ab'[k]}", "repro eplus", config,
               [xa.param, ya.param, "class"], rows, [summary[k]], fmt)
    plot_grids(grids, outdir / "eplus.svg", ["Eplus, alpha-beta", "Eplus, s-w"])
    return summary


def diagram_figure(fig: str, p: Parameters, options: dict, fmt: str, outdir: Path,
                   config: dict):
    from .plotting import plot_diagram

    recipe = DIAGRAM_FIGURES[fig]
    which = recipe["param"]
    critical = bifurcation.ns_locate(p, which, recipe["ns"])
    summary = [f"{which}_NS={critical:.6f}"]
    nf = bifurcation.normal_form(p.with_value(which, critical), which)
    summary.append(f"sigma_star={nf.sigma_star:.6e} ({nf.direction.value})")
    threshold = None
    if recipe["th"] is not None:
        threshold = scan.extinction_threshold(p, which, recipe["th"], THRESHOLD_TOL,
                                              options["transient"])
        summary.append(f"{which}_th={threshold:.4f}")
    d = scan.bifurcation_diagram(p, which, *recipe["sweep"], n=options["sweep_n"],
                                 transient=options["transient"], keep=options["keep"])
    cols = [which, "k", "x", "y", "fate"]
    rows = []
    for i, v in enumerate(d.values):
        for k in range(d.keep):
            x, y = d.samples[i, k]
            if np.isnan(x):
                break
            rows.append([float(v), k, float(x), float(y), d.fates[i].value])
    line = "; ".join(summary)
    _write(outdir / f"{fig}_diagram", f"repro {fig}", config, cols, rows, summary, fmt)

    portraits, eplus, prow = [], [], []
    for value in recipe["portraits"]:
        v = critical if value == "ns" else value
        q = p.with_value(which, v)
        orbit = iterate_orbit(q, scan.standard_seed(q), 0, PORTRAIT_STEPS)
        label = f"{which}={v:.6g}"
        portraits.append((label, orbit.states))
        eplus.append(coexistence_point(q))
        fate = scan.orbit_fate(q, scan.standard_seed(q), options["transient"])
        prow.extend([float(v), k + 1, float(x), float(y), fate.value]
                    for k, (x, y) in enumerate(orbit.states))
    _write(outdir / f"{fig}_portraits", f"repro {fig}", config,
           [which, "n", "x", "y", "fate"], prow, summary, fmt)
    plot_diagram(d, outdir / f"{fig}.svg", critical=critical, threshold=threshold,
                 portraits=portraits, eplus=eplus)
    return [line]


def run_figure(fig: str, p: Parameters, options: dict, fmt: str, outdir: Path,
               config: dict) -> list[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    config = {"figure": fig, **config}
    if fig in GRID_FIGURES:
        lines = grid_figure(fig, p, options, fmt, outdir, config)
    elif fig == "eplus":
        lines = eplus_figure(p, options, fmt, outdir, config)
    else:
        lines = diagram_figure(fig, p, options, fmt, outdir, config)
    (outdir / f"{fig}_summary.txt").write_text("\n".join(lines) + "\n")
    return [f"{fig}: {line}" for line in lines]
