"""Command-line front end.

Exit codes: 0 success, 2 invalid parameters, 3 numerical failure, 64 usage error.
Settings are layered: built-in defaults, then a config file (``--config`` or
the ``ALLEEMAP_CONFIG`` environment variable), then command-line flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bifurcation, fixed_points, report, scan
from .errors import AnalysisError, DomainError
from .model import (
    BASELINE,
    BASELINE_RAW,
    PARAM_NAMES,
    Divergence,
    Parameters,
    RawParameters,
    State,
    iterate_orbit,
    jacobian_analytic,
    jacobian_fd,
    nondimensionalize,
)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

CONFIG_ENV = "ALLEEMAP_CONFIG"
RAW_NAMES = ("r", "K", "p", "q", "a", "h", "b", "c")

#: Brackets around the critical values reported for the baseline parameters.
NS_BRACKETS = {
    "s": (0.20, 0.26),
    "w": (2.0, 2.5),
    "alpha": (8.0, 8.1),
    "beta": (1.30, 1.40),
    "theta": (0.120, 0.130),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Opt:
    name: str
    type: type
    default: object = None
    nargs: int | None = None
    help: str = ""
    choices: tuple | None = None


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


COMMANDS = {
    "fixed-points": [
        Opt("margin", float, 1e-6, help="hyperbolicity margin on eigenvalue moduli"),
    ],
    "classify": [
        Opt("point", str, "all", choices=("all",) + fixed_points.FIXED_POINT_NAMES),
        Opt("margin", float, 1e-6, help="hyperbolicity margin on eigenvalue moduli"),
        Opt("tol", float, 1e-6, help="equality width for the closed-form inequalities"),
    ],
    "simulate": [
        Opt("x0", float, 0.5), Opt("y0", float, 1.0),
        Opt("steps", int, 100, help="number of recorded iterates"),
        Opt("transient", int, 0, help="iterates discarded before recording"),
    ],
    "jacobian": [
        Opt("x", float, None, help="state x (default: E+ when it exists)"),
        Opt("y", float, None, help="state y"),
        Opt("step", float, 1e-6, help="finite-difference step"),
    ],
    "ns": [
        Opt("param", str, "beta", choices=PARAM_NAMES),
        Opt("bracket", float, None, nargs=2),
        Opt("tol", float, bifurcation.ROOT_TOL),
    ],
    "normal-form": [
        Opt("param", str, "beta", choices=PARAM_NAMES),
        Opt("bracket", float, None, nargs=2,
            help="locate the critical value first; omit to use the given parameters as critical"),
        Opt("locate", _bool, True, help="locate the critical value before the normal form"),
    ],
    "scan": [
        Opt("target", str, "E1", choices=fixed_points.FIXED_POINT_NAMES),
        Opt("x_param", str, "s", choices=PARAM_NAMES),
        Opt("x_range", float, (0.0, 4.0), nargs=2),
        Opt("y_param", str, "w", choices=PARAM_NAMES),
        Opt("y_range", float, (0.0, 3.0), nargs=2),
        Opt("nx", int, scan.DEFAULT_GRID_N),
        Opt("ny", int, scan.DEFAULT_GRID_N),
        Opt("margin", float, 1e-6),
        Opt("workers", int, 1),
    ],
    "diagram": [
        Opt("param", str, "beta", choices=PARAM_NAMES),
        Opt("range", float, (1.30, 1.36), nargs=2),
        Opt("n", int, scan.DEFAULT_SWEEP_N),
        Opt("transient", int, scan.DEFAULT_TRANSIENT),
        Opt("keep", int, scan.DEFAULT_KEEP),
        Opt("cold", _bool, False, help="seed every sweep point from the standard seed"),
        Opt("workers", int, 1),
    ],
    "threshold": [
        Opt("param", str, "s", choices=PARAM_NAMES),
        Opt("bracket", float, (0.25, 0.27), nargs=2),
        Opt("tol", float, 1e-4),
        Opt("transient", int, scan.DEFAULT_TRANSIENT),
    ],
    "repro": [
        Opt("grid_n", int, scan.DEFAULT_GRID_N, help="cells per axis for grid figures"),
        Opt("sweep_n", int, scan.DEFAULT_SWEEP_N, help="sweep points for diagram figures"),
        Opt("transient", int, scan.DEFAULT_TRANSIENT),
        Opt("keep", int, scan.DEFAULT_KEEP),
    ],
}

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "eplus")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alleemap", allow_abbrev=False,
                     description="Discrete predator-prey map with a double Allee effect.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, opts in COMMANDS.items():
        cmd = sub.add_parser(name, allow_abbrev=False)
        if name == "repro":
            cmd.add_argument("figure", choices=FIGURES)
            cmd.add_argument("--outdir", default="repro_out")
        common = cmd.add_argument_group("parameters")
        for pname in PARAM_NAMES:
            common.add_argument(f"--{pname}", type=float, default=None)
        raw = cmd.add_argument_group("dimensional parameters (alternative to the above)")
        for rname in RAW_NAMES:
            raw.add_argument(f"--{rname}", dest=f"raw_{rname}", type=float, default=None)
        cmd.add_argument("--config", default=None, help="key = value file (or a previous output)")
        cmd.add_argument("--format", choices=("csv", "json"), default=None)
        if name != "repro":
            cmd.add_argument("--out", default=None, help="data file (default: stdout)")
            cmd.add_argument("--plot", default=None, help="figure file (.svg, .png, ...)")
        for opt in opts:
            flag = "--" + opt.name.replace("_", "-")
            kwargs = dict(dest=opt.name, default=None, help=opt.help or None)
            if opt.type is _bool:
                kwargs.update(nargs="?", const=True, type=_bool)
            else:
                kwargs.update(type=opt.type, nargs=opt.nargs, choices=opt.choices)
            cmd.add_argument(flag, **kwargs)
    return parser


def _convert(opt: Opt, text: str):
    if opt.nargs:
        parts = text.split()
        if len(parts) != opt.nargs:
            raise UsageError(f"config key {opt.name} needs {opt.nargs} values")
        return tuple(opt.type(v) for v in parts)
    value = opt.type(text)
    if opt.choices and value not in opt.choices:
        raise UsageError(f"config key {opt.name}={value!r} not in {opt.choices}")
    return value


def resolve_parameters(args, file_cfg: dict) -> Parameters:
    cli_dims = {k: getattr(args, k) for k in PARAM_NAMES if getattr(args, k) is not None}
    cli_raw = {k: getattr(args, f"raw_{k}") for k in RAW_NAMES
               if getattr(args, f"raw_{k}") is not None}
    file_dims = {k: float(file_cfg[k]) for k in PARAM_NAMES if k in file_cfg}
    file_raw = {k: float(file_cfg[k]) for k in RAW_NAMES if k in file_cfg}
    if cli_dims and cli_raw:
        raise UsageError("give either dimensionless or dimensional parameters, not both")
    if file_dims and file_raw:
        raise DomainError("config mixes dimensionless and dimensional parameters")
    raw = {**file_raw, **cli_raw}
    if raw:
        base = nondimensionalize(RawParameters(**{**BASELINE_RAW.__dict__, **raw}))
    else:
        base = BASELINE
    values = base.as_dict()
    if not cli_raw:
        values.update(file_dims)
    values.update(cli_dims)
    return Parameters(**values)


def resolve(args) -> tuple[Parameters, dict, str]:
    config_path = args.config or os.environ.get(CONFIG_ENV)
    file_cfg = report.load_config(config_path) if config_path else {}
    params = resolve_parameters(args, file_cfg)
    options = {}
    for opt in COMMANDS[args.command]:
        value = getattr(args, opt.name)
        if value is None and opt.name in file_cfg and file_cfg[opt.name] != "":
            value = _convert(opt, file_cfg[opt.name])
        if value is None:
            value = opt.default
        if isinstance(value, list):
            value = tuple(value)
        options[opt.name] = value
    fmt = args.format or file_cfg.get("format") or "csv"
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    return params, options, fmt


def _echo(params: Parameters, options: dict, fmt: str) -> dict:
    cfg = params.as_dict()
    cfg.update(options)
    cfg["format"] = fmt
    return cfg


def _eig_cells(eigs):
    return [eigs[0].real, eigs[0].imag, eigs[1].real, eigs[1].imag, abs(eigs[0]), abs(eigs[1])]


def _analytic(p, name, tol):
    try:
        return str(fixed_points.classify_boundary_analytic(p, name, tol))
    except AnalysisError:
        return ""


# --- subcommands -----------------------------------------------------------------
# Each returns (columns, rows, summary, plot_callback or None).

def cmd_fixed_points(p, o):
    cols = ["name", "x", "y", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im",
            "modulus1", "modulus2", "numeric", "analytic"]
    rows = []
    for fp in fixed_points.enumerate_fixed_points(p, o["margin"]):
        rows.append([fp.name, fp.location.x, fp.location.y, *_eig_cells(fp.eigenvalues),
                     str(fp.kind), _analytic(p, fp.name, o["margin"])])
    summary = [f"{fp.name}({fp.location.x:.6f},{fp.location.y:.6f}) {fp.kind}"
               for fp in fixed_points.enumerate_fixed_points(p, o["margin"])]
    return cols, rows, summary, None


def cmd_classify(p, o):
    names = [fp.name for fp in fixed_points.enumerate_fixed_points(p, o["margin"])]
    if o["point"] != "all":
        if o["point"] not in names:
            raise fixed_points.AbsentFixedPoint(f"{o['point']} does not exist for {p}")
        names = [o["point"]]
    cols = ["name", "numeric", "analytic"]
    rows = []
    for fp in fixed_points.enumerate_fixed_points(p, o["margin"]):
        if fp.name in names:
            numeric = fixed_points.classify_numeric(p, fp.location, o["margin"])
            rows.append([fp.name, str(numeric), _analytic(p, fp.name, o["tol"])])
    summary = [f"{r[0]}: numeric={r[1]} analytic={r[2]}" for r in rows]
    return cols, rows, summary, None


def cmd_simulate(p, o):
    orbit = iterate_orbit(p, State(o["x0"], o["y0"]), o["transient"], o["steps"])
    rows = [[o["transient"] + k + 1, x, y] for k, (x, y) in enumerate(orbit.states)]
    summary = []
    if orbit.diverged:
        summary.append(f"diverged at iterate {orbit.diverged_at}")

    def plot(path):
        from .plotting import plot_orbit
        plot_orbit(orbit.states, path, fixed_points.coexistence_point(p))
    return ["n", "x", "y"], rows, summary, plot


def cmd_jacobian(p, o):
    if o["x"] is None or o["y"] is None:
        st = fixed_points.coexistence_point(p)
        if st is None:
            raise UsageError("--x and --y are required when E+ does not exist")
        o["x"], o["y"] = st.x, st.y
    st = State(o["x"], o["y"])
    ja = jacobian_analytic(p, st)
    jf = jacobian_fd(p, st, o["step"])
    rows = [["analytic", *ja.ravel()], ["finite-difference", *jf.ravel()]]
    err = float(np.max(np.abs(ja - jf)))
    return ["method", "J11", "J12", "J21", "J22"], rows, [f"max |analytic - fd| = {err:.3e}"], None


def _bracket(o):
    return o["bracket"] if o["bracket"] is not None else NS_BRACKETS[o["param"]]


def cmd_ns(p, o):
    o["bracket"] = tuple(_bracket(o))
    which = o["param"]
    value = bifurcation.ns_locate(p, which, o["bracket"], o["tol"])
    q = p.with_value(which, value)
    cond = bifurcation.ns_nondegeneracy(q, which)
    cols = ["param", "critical_value", "detJ", "trJ", "discriminant", "M1_0",
            "transversality", "resonance_ok"]
    rows = [[which, value, cond.detJ, cond.trJ, cond.discriminant, cond.M1_0,
             cond.transversality, cond.resonance_ok]]
    return cols, rows, [f"{which}_NS = {value:.6f}"], None


def cmd_normal_form(p, o):
    which = o["param"]
    if o["locate"]:
        o["bracket"] = tuple(_bracket(o))
        p = p.with_value(which, bifurcation.ns_locate(p, which, o["bracket"]))
    nf = bifurcation.normal_form(p, which)
    cond = bifurcation.ns_nondegeneracy(p, which)
    rows = [["critical_value", nf.critical_value], ["eta1", nf.eigen_pair.real],
            ["eta2", nf.eigen_pair.imag], ["transversality", cond.transversality],
            ["resonance_ok", cond.resonance_ok]]
    for key, g in nf.gammas.items():
        rows.append([f"{key}_re", g.real])
        rows.append([f"{key}_im", g.imag])
    rows.append(["sigma_star", nf.sigma_star])
    rows.append(["direction", nf.direction.value])
    summary = [f"{which}_NS = {nf.critical_value:.6f}",
               f"sigma_star = {nf.sigma_star:.6e} ({nf.direction.value})"]
    return ["quantity", "value"], rows, summary, None


def cmd_scan(p, o):
    xa = scan.GridAxis(o["x_param"], *o["x_range"], o["nx"])
    ya = scan.GridAxis(o["y_param"], *o["y_range"], o["ny"])
    grid = scan.plane_scan(p, xa, ya, o["target"], o["margin"], o["workers"])
    cols, rows = _grid_rows(grid)
    summary = [", ".join(f"{k}={v}" for k, v in sorted(grid.counts().items()))]

    def plot(path):
        from .plotting import plot_grids
        plot_grids([grid], path, [f"{o['target']}"])
    return cols, rows, summary, plot


def _grid_rows(grid):
    cols = [grid.x_axis.param, grid.y_axis.param, "class"]
    rows = []
    for i, yv in enumerate(grid.y_axis.centers):
        for j, xv in enumerate(grid.x_axis.centers):
            rows.append([float(xv), float(yv), grid.cells[i, j]])
    return cols, rows


def _diagram_rows(d):
    cols = [d.param, "k", "x", "y", "fate"]
    rows = []
    for i, v in enumerate(d.values):
        for k in range(d.keep):
            x, y = d.samples[i, k]
            if np.isnan(x):
                break
            rows.append([float(v), k, float(x), float(y), d.fates[i].value])
    return cols, rows


def cmd_diagram(p, o):
    d = scan.bifurcation_diagram(p, o["param"], *o["range"], n=o["n"],
                                 transient=o["transient"], keep=o["keep"],
                                 warm=not o["cold"], workers=o["workers"])
    cols, rows = _diagram_rows(d)
    counts = {}
    for f in d.fates:
        counts[f.value] = counts.get(f.value, 0) + 1
    summary = [", ".join(f"{k}={v}" for k, v in sorted(counts.items()))]

    def plot(path):
        from .plotting import plot_diagram
        plot_diagram(d, path)
    return cols, rows, summary, plot


def cmd_threshold(p, o):
    which = o["param"]
    value = scan.extinction_threshold(p, which, o["bracket"], o["tol"], o["transient"])
    rows = [[which, value, o["tol"]]]
    return ["param", "threshold", "tol"], rows, [f"{which}_th = {value:.6f}"], None


HANDLERS = {
    "fixed-points": cmd_fixed_points,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "jacobian": cmd_jacobian,
    "ns": cmd_ns,
    "normal-form": cmd_normal_form,
    "scan": cmd_scan,
    "diagram": cmd_diagram,
    "threshold": cmd_threshold,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on --help (0) and on malformed flags (64)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        params, options, fmt = resolve(args)
        if args.command == "repro":
            from .repro import run_figure
            lines = run_figure(args.figure, params, options, fmt, Path(args.outdir),
                               _echo(params, options, fmt))
            for line in lines:
                stdout.write(line + "\n")
            return EXIT_OK
        cols, rows, summary, plot = HANDLERS[args.command](params, options)
        text = report.render(args.command, _echo(params, options, fmt), cols, rows, summary, fmt)
        if args.out:
            report.write(text, args.out, stdout)
            for line in summary:
                stdout.write(line + "\n")
        else:
            report.write(text, None, stdout)
        if args.plot:
            if plot is None:
                raise UsageError(f"{args.command} has no plot")
            plot(args.plot)
    except UsageError as exc:
        print(f"alleemap: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"alleemap: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (AnalysisError, Divergence) as exc:
        print(f"alleemap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
