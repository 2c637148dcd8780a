"""Parameter scans: stability grids, bifurcation diagrams, orbit fates and
extinction thresholds."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, InvalidAxes, NoFateChange
from .fixed_points import (
    FIXED_POINT_NAMES,
    HYPERBOLIC_MARGIN,
    classify_numeric,
    coexistence_point,
    enumerate_fixed_points,
)
from .model import EXP_CAP, PARAM_NAMES, Parameters, State, iterate_orbit

DEFAULT_TRANSIENT = 10_000
DEFAULT_KEEP = 200
DEFAULT_GRID_N = 400
DEFAULT_SWEEP_N = 600
FATE_WINDOW = 100
EXTINCTION_TOL = 1e-12
PREY_FLOOR = 1e-6
STEADY_TOL = 1e-8
SEED_OFFSET = 1e-2
FALLBACK_SEED = State(0.5, 0.5)

ABSENT = "absent"


class Fate(str, Enum):
    STEADY_COEXISTENCE = "steady-coexistence"
    INVARIANT_CURVE_OR_CYCLE = "invariant-curve-or-cycle"
    PREY_ONLY = "prey-only"
    EXTINCTION = "extinction"
    DIVERGENCE = "divergence"


@dataclass(frozen=True)
class GridAxis:
    param: str
    lo: float
    hi: float
    n: int

    @property
    def centers(self) -> np.ndarray:
        step = (self.hi - self.lo) / self.n
        return self.lo + (np.arange(self.n) + 0.5) * step

    def index_of(self, value: float) -> int:
        i = int((value - self.lo) / (self.hi - self.lo) * self.n)
        if not 0 <= i < self.n:
            raise IndexError(f"{self.param}={value!r} outside [{self.lo}, {self.hi}]")
        return i


@dataclass(frozen=True)
class ClassificationGrid:
    """``cells[i, j]`` classifies the target at ``(x_axis.centers[j], y_axis.centers[i])``."""

    x_axis: GridAxis
    y_axis: GridAxis
    target: str
    cells: np.ndarray

    def cell_at(self, xv: float, yv: float) -> str:
        return str(self.cells[self.y_axis.index_of(yv), self.x_axis.index_of(xv)])

    def counts(self) -> dict:
        labels, n = np.unique(self.cells, return_counts=True)
        return {str(k): int(v) for k, v in zip(labels, n)}


@dataclass(frozen=True)
class BifurcationDiagram:
    """Post-transient samples for each sweep value.

    ``samples`` has shape ``(len(values), keep, 2)``; rows of a diverged orbit
    are padded with NaN after the last recorded state.
    """

    param: str
    values: np.ndarray
    samples: np.ndarray
    fates: list
    transient: int
    keep: int

    def at(self, value: float) -> int:
        return int(np.argmin(np.abs(self.values - value)))


def classify_tail(states: np.ndarray, diverged: bool = False) -> Fate:
    """Fate of an orbit from its recorded final iterates."""
    if diverged or len(states) == 0:
        return Fate.DIVERGENCE
    x, y = states[:, 0], states[:, 1]
    if np.all(x < EXTINCTION_TOL) and np.all(y < EXTINCTION_TOL):
        return Fate.EXTINCTION
    if np.all(y < EXTINCTION_TOL) and np.all(x > PREY_FLOOR):
        return Fate.PREY_ONLY
    if np.max(np.abs(states - states.mean(axis=0))) <= STEADY_TOL:
        return Fate.STEADY_COEXISTENCE
    return Fate.INVARIANT_CURVE_OR_CYCLE


def orbit_fate(p: Parameters, st0: State, transient: int = DEFAULT_TRANSIENT,
               window: int = FATE_WINDOW, cap: float = EXP_CAP) -> Fate:
    orbit = iterate_orbit(p, st0, transient, window, cap)
    return classify_tail(orbit.states, orbit.diverged)


def standard_seed(p: Parameters) -> State:
    """E+ shifted by (1e-2, 1e-2) when it exists, otherwise (0.5, 0.5)."""
    interior = coexistence_point(p)
    if interior is None:
        return FALLBACK_SEED
    return State(interior.x + SEED_OFFSET, interior.y + SEED_OFFSET)


def _classify_cell(p: Parameters, target: str, margin: float) -> str:
    for fp in enumerate_fixed_points(p, margin):
        if fp.name == target:
            return classify_numeric(p, fp.location, margin).tag.value
    return ABSENT


def _scan_row(args) -> list:
    p, x_axis, y_axis, yv, target, margin = args
    row = []
    for xv in x_axis.centers:
        try:
            q = p.with_value(x_axis.param, xv).with_value(y_axis.param, yv)
        except DomainError:
            row.append(ABSENT)
            continue
        row.append(_classify_cell(q, target, margin))
    return row


def plane_scan(p: Parameters, x_axis: GridAxis, y_axis: GridAxis, target: str,
               margin: float = HYPERBOLIC_MARGIN, workers: int = 1) -> ClassificationGrid:
    """Classify ``target`` over a two-parameter grid of cell centres.

    Cells where the parameters are inadmissible or the fixed point does not
    exist are marked ``"absent"``.
    """
    for axis in (x_axis, y_axis):
        if axis.param not in PARAM_NAMES:
            raise InvalidAxes(f"unknown parameter {axis.param!r}")
        if axis.n < 2 or not axis.hi > axis.lo:
            raise InvalidAxes(f"axis {axis.param} needs n >= 2 and hi > lo")
    if x_axis.param == y_axis.param:
        raise InvalidAxes("the two axes must vary different parameters")
    if target not in FIXED_POINT_NAMES:
        raise InvalidAxes(f"unknown fixed point {target!r}")
    jobs = [(p, x_axis, y_axis, yv, target, margin) for yv in y_axis.centers]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_scan_row(job) for job in jobs]
    return ClassificationGrid(x_axis, y_axis, target, np.array(rows, dtype=object).astype(str))


def _sweep_point(args):
    q, seed, transient, keep = args
    return iterate_orbit(q, seed, transient, keep)


def bifurcation_diagram(p: Parameters, which: str, lo: float, hi: float,
                        n: int = DEFAULT_SWEEP_N, transient: int = DEFAULT_TRANSIENT,
                        keep: int = DEFAULT_KEEP, warm: bool = True,
                        workers: int = 1) -> BifurcationDiagram:
    """Sweep ``which`` over ``n`` points of ``[lo, hi]`` and record attractors.

    With ``warm=True`` each sweep point starts from the last state of the
    previous one, unless that orbit collapsed or diverged, in which case the
    standard seed is used again.
    """
    if n < 2 or not lo < hi:
        raise DomainError("bifurcation_diagram needs n >= 2 and lo < hi")
    values = np.linspace(lo, hi, n)
    params = [p.with_value(which, v) for v in values]
    samples = np.full((n, keep, 2), np.nan)
    fates = []
    if warm:
        seed = None
        orbits = []
        for q in params:
            if seed is None:
                seed = standard_seed(q)
            orbit = iterate_orbit(q, seed, transient, keep)
            orbits.append(orbit)
            fate = classify_tail(orbit.states[-FATE_WINDOW:], orbit.diverged)
            seed = (None if fate in (Fate.EXTINCTION, Fate.DIVERGENCE)
                    else State(*orbit.states[-1]))
    else:
        jobs = [(q, standard_seed(q), transient, keep) for q in params]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                orbits = list(pool.map(_sweep_point, jobs))
        else:
            orbits = [_sweep_point(job) for job in jobs]
    for k, orbit in enumerate(orbits):
        samples[k, : orbit.kept_len] = orbit.states
        fates.append(classify_tail(orbit.states[-FATE_WINDOW:], orbit.diverged))
    return BifurcationDiagram(which, values, samples, fates, transient, keep)


def extinction_threshold(p: Parameters, which: str, bracket, tol: float = 1e-4,
                         transient: int = DEFAULT_TRANSIENT) -> float:
    """Bisect on the boundary between extinction and survival from the standard seed."""
    lo, hi = sorted(float(b) for b in bracket)

    def extinct(v):
        q = p.with_value(which, v)
        return orbit_fate(q, standard_seed(q), transient) is Fate.EXTINCTION

    lo_ext, hi_ext = extinct(lo), extinct(hi)
    if lo_ext == hi_ext:
        raise NoFateChange(
            f"orbit fate is {'extinction' if lo_ext else 'survival'} at both "
            f"{which}={lo!r} and {which}={hi!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if extinct(mid) == lo_ext:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
