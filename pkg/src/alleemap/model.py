"""The semi-discrete predator-prey map with a double Allee effect on the prey.

One step of the map sends a prey/predator pair ``(x, y)`` to::

    x' = x * exp[(1 - x)(x - s)/(x + w) - y/(1 + alpha x)]
    y' = y * exp[beta x/(1 + alpha x) - theta]

All quantities are dimensionless; :func:`nondimensionalize` converts the
dimensional constants of the underlying continuous model.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError

PARAM_NAMES = ("s", "w", "alpha", "beta", "theta")

#: Exponent arguments above this are treated as a divergent orbit.
EXP_CAP = 700.0


@dataclass(frozen=True)
class RawParameters:
    """Dimensional constants of the continuous-time model.

    ``p`` is the strong-Allee threshold density and may be negative (weak
    Allee effect); every other constant must be strictly positive.
    """

    r: float
    K: float
    p: float
    q: float
    a: float
    h: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("r", "K", "q", "a", "h", "b", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"raw parameter {name} must be positive, got {value!r}")
        if not math.isfinite(self.p):
            raise DomainError(f"raw parameter p must be finite, got {self.p!r}")


@dataclass(frozen=True)
class Parameters:
    """Dimensionless model constants.

    s : strong-Allee threshold, w : weak-Allee constant, alpha : saturation
    constant, beta : conversion rate, theta : predator death rate.
    """

    s: float
    w: float
    alpha: float
    beta: float
    theta: float

    def __post_init__(self):
        for name in PARAM_NAMES:
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"parameter {name} must be finite")
        if not self.w > 0:
            raise DomainError(f"w must be positive, got {self.w!r}")
        if not self.alpha >= 0:
            raise DomainError(f"alpha must be non-negative, got {self.alpha!r}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")
        if not self.theta > 0:
            raise DomainError(f"theta must be positive, got {self.theta!r}")
        if not self.s > -self.w:
            raise DomainError(f"s must exceed -w, got s={self.s!r}, w={self.w!r}")

    def with_value(self, name: str, value: float) -> "Parameters":
        if name not in PARAM_NAMES:
            raise DomainError(f"unknown parameter {name!r}; expected one of {PARAM_NAMES}")
        return dataclasses.replace(self, **{name: float(value)})

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


#: Parameter set used for every numerical experiment in the reference study.
BASELINE = Parameters(s=0.0125, w=0.125, alpha=8.4, beta=1.3, theta=0.13)

#: Dimensional constants that produce (approximately) BASELINE.
BASELINE_RAW = RawParameters(r=1.293, K=4.0, p=0.05, q=0.5, a=0.7, h=3.0, b=0.6, c=0.168)


class State(NamedTuple):
    x: float
    y: float


class Divergence(ArithmeticError):
    """Raised when an exponent argument exceeds the overflow cap."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class Orbit:
    """Recorded portion of a trajectory.

    ``states`` has shape ``(kept_len, 2)``.  When the orbit diverged,
    ``diverged_at`` is the zero-based iterate index (counting the transient)
    at which the cap was hit and ``states`` holds whatever was recorded
    before that.
    """

    states: np.ndarray
    transient_len: int
    kept_len: int
    diverged_at: int | None = None

    @property
    def diverged(self) -> bool:
        return self.diverged_at is not None

    @property
    def x(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.states[:, 1]


def nondimensionalize(raw: RawParameters) -> Parameters:
    """Map dimensional constants to ``(s, w, alpha, beta, theta)``."""
    return Parameters(
        s=raw.p / raw.K,
        w=raw.q / raw.K,
        alpha=raw.a * raw.h * raw.K,
        beta=raw.b * raw.a * raw.K / raw.r,
        theta=raw.c / raw.r,
    )


def _step(x, y, s, w, alpha, beta, theta, cap):
    # Shared by map_step and the orbit loop so both are bitwise identical.
    sat = 1.0 + alpha * x
    ex = (1.0 - x) * (x - s) / (x + w) - y / sat
    ey = beta * x / sat - theta
    if ex > cap or ey > cap or ex != ex or ey != ey:
        raise Divergence(f"exponent argument exceeds cap {cap} at x={x!r}, y={y!r}")
    return x * math.exp(ex), y * math.exp(ey)


def map_step(p: Parameters, st: State, cap: float = EXP_CAP) -> State:
    """Apply the map once.  Raises :class:`Divergence` past the overflow cap."""
    x, y = st
    if not x > -p.w:
        raise DomainError(f"state x={x!r} must exceed -w={-p.w!r}")
    return State(*_step(x, y, p.s, p.w, p.alpha, p.beta, p.theta, cap))


def iterate_orbit(p: Parameters, st0: State, transient: int, keep: int,
                  cap: float = EXP_CAP) -> Orbit:
    """Discard ``transient`` iterates of ``st0`` and record the next ``keep``."""
    if transient < 0 or keep < 1:
        raise DomainError("need transient >= 0 and keep >= 1")
    x, y = float(st0[0]), float(st0[1])
    if not x > -p.w:
        raise DomainError(f"state x={x!r} must exceed -w={-p.w!r}")
    s, w, alpha, beta, theta = p.s, p.w, p.alpha, p.beta, p.theta
    out = np.empty((keep, 2))
    n = 0
    try:
        for n in range(transient):
            x, y = _step(x, y, s, w, alpha, beta, theta, cap)
        for k in range(keep):
            n = transient + k
            x, y = _step(x, y, s, w, alpha, beta, theta, cap)
            out[k, 0] = x
            out[k, 1] = y
    except Divergence:
        kept = max(0, n - transient)
        return Orbit(out[:kept].copy(), transient, kept, diverged_at=n)
    return Orbit(out, transient, keep)


def jacobian_analytic(p: Parameters, st: State) -> np.ndarray:
    """Exact 2x2 derivative of the map at ``st``."""
    x, y = float(st[0]), float(st[1])
    if not x > -p.w:
        raise DomainError(f"state x={x!r} must exceed -w={-p.w!r}")
    s, w, alpha, beta, theta = p.s, p.w, p.alpha, p.beta, p.theta
    sat = 1.0 + alpha * x
    f = x * math.exp((1.0 - x) * (x - s) / (x + w) - y / sat)
    g = y * math.exp(beta * x / sat - theta)
    # d/dx of the prey exponent; (1 + w)(s + w) = s + w + sw + w^2
    dex = -1.0 + (1.0 + w) * (s + w) / (x + w) ** 2 + alpha * y / sat**2
    ef = math.exp((1.0 - x) * (x - s) / (x + w) - y / sat)
    eg = math.exp(beta * x / sat - theta)
    return np.array([
        [ef + f * dex, -x * ef / sat],
        [beta * g / sat**2, eg],
    ])


def jacobian_fd(p: Parameters, st: State, h: float = 1e-6) -> np.ndarray:
    """Central-difference approximation of the map's derivative."""
    if not h > 0:
        raise DomainError("step h must be positive")
    x, y = float(st[0]), float(st[1])
    if not x - h > -p.w:
        raise DomainError("x - h must exceed -w")
    jac = np.empty((2, 2))
    fp = map_step(p, State(x + h, y))
    fm = map_step(p, State(x - h, y))
    jac[:, 0] = (np.subtract(fp, fm)) / (2 * h)
    fp = map_step(p, State(x, y + h))
    fm = map_step(p, State(x, y - h))
    jac[:, 1] = (np.subtract(fp, fm)) / (2 * h)
    return jac
