"""Equilibria of the map and their local stability.

Every fixed point is classified twice: numerically, from the moduli of the
Jacobian eigenvalues, and analytically, from closed-form inequalities in the
parameters.  The two routes are kept independent so they can check each other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum


from .errors import AbsentFixedPoint, NotAFixedPoint
from .model import Parameters, State, jacobian_analytic, map_step

#: Default hyperbolicity margin on eigenvalue moduli.
HYPERBOLIC_MARGIN = 1e-6
#: Minimum x-separation for two equilibria to be reported as distinct.
COINCIDENCE_TOL = 1e-12
RESIDUAL_TOL = 1e-8

FIXED_POINT_NAMES = ("E0", "Es", "E1", "Eplus")


class Stability(str, Enum):
    SINK = "sink"
    SOURCE = "source"
    SADDLE = "saddle"
    NONHYPERBOLIC = "non-hyperbolic"


# which eigenvalue condition binds for a non-hyperbolic point
PLUS_ONE = "plus-one"
MINUS_ONE = "minus-one"
COMPLEX_PAIR = "complex-pair"


@dataclass(frozen=True)
class StabilityKind:
    tag: Stability
    detail: str | None = None

    def __str__(self):
        return self.tag.value if self.detail is None else f"{self.tag.value}({self.detail})"


@dataclass(frozen=True)
class FixedPoint:
    name: str
    location: State
    eigenvalues: tuple[complex, complex]
    kind: StabilityKind


def eigenvalues(jac) -> tuple[complex, complex]:
    """Roots of ``lambda^2 - tr(J) lambda + det(J)`` by the quadratic formula."""
    tr = jac[0][0] + jac[1][1]
    det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0]
    disc = tr * tr - 4.0 * det
    if disc < 0:
        root = cmath.sqrt(disc)
        return complex(tr / 2, 0) + root / 2, complex(tr / 2, 0) - root / 2
    root = math.sqrt(disc)
    # cancellation-free pairing of the two real roots
    big = (tr + math.copysign(root, tr)) / 2
    small = det / big if big != 0 else 0.0
    return complex(big), complex(small)


def classify_eigenvalues(eigs, margin: float = HYPERBOLIC_MARGIN) -> StabilityKind:
    mods = [abs(lam) for lam in eigs]
    for lam, m in zip(eigs, mods):
        if abs(m - 1.0) <= margin:
            if abs(lam.imag) > 0:
                return StabilityKind(Stability.NONHYPERBOLIC, COMPLEX_PAIR)
            detail = MINUS_ONE if lam.real < 0 else PLUS_ONE
            return StabilityKind(Stability.NONHYPERBOLIC, detail)
    inside = sum(m < 1.0 for m in mods)
    if inside == 2:
        return StabilityKind(Stability.SINK)
    if inside == 0:
        return StabilityKind(Stability.SOURCE)
    return StabilityKind(Stability.SADDLE)


def coexistence_point(p: Parameters) -> State | None:
    """Interior equilibrium ``(x+, y+)``, or ``None`` when it does not exist."""
    denom = p.beta - p.alpha * p.theta
    if not denom > 0:
        return None
    x = p.theta / denom
    if not (p.s < x < 1.0 or 1.0 < x < p.s):
        return None
    y = (1.0 + p.alpha * x) * (1.0 - x) * (x - p.s) / (x + p.w)
    if not y > 0:
        return None
    return State(x, y)


def residual(p: Parameters, location: State) -> float:
    nxt = map_step(p, location)
    return max(abs(nxt.x - location.x), abs(nxt.y - location.y))


def classify_numeric(p: Parameters, location: State,
                     margin: float = HYPERBOLIC_MARGIN) -> StabilityKind:
    """Classify a fixed point by its eigenvalue moduli relative to 1."""
    location = State(float(location[0]), float(location[1]))
    res = residual(p, location)
    if res > RESIDUAL_TOL:
        raise NotAFixedPoint(f"{tuple(location)} is not a fixed point (residual {res:.3g})")
    return classify_eigenvalues(eigenvalues(jacobian_analytic(p, location)), margin)


def enumerate_fixed_points(p: Parameters,
                           margin: float = HYPERBOLIC_MARGIN) -> list[FixedPoint]:
    """All equilibria that exist for ``p``, in the order E0, Es, E1, Eplus."""
    locations = [("E0", State(0.0, 0.0))]
    if p.s > COINCIDENCE_TOL and abs(p.s - 1.0) > COINCIDENCE_TOL:
        locations.append(("Es", State(p.s, 0.0)))
    locations.append(("E1", State(1.0, 0.0)))
    interior = coexistence_point(p)
    if interior is not None and min(abs(interior.x - p.s),
                                    abs(interior.x - 1.0)) > COINCIDENCE_TOL:
        locations.append(("Eplus", interior))
    out = []
    for name, loc in locations:
        eigs = eigenvalues(jacobian_analytic(p, loc))
        out.append(FixedPoint(name, loc, eigs, classify_eigenvalues(eigs, margin)))
    return out


def fixed_point(p: Parameters, name: str) -> FixedPoint:
    for fp in enumerate_fixed_points(p):
        if fp.name == name:
            return fp
    raise AbsentFixedPoint(f"{name} does not exist for {p}")


def es_upper_root(w: float) -> float:
    """Largest root of s(s-1)/(s+w) = 2, where the E_s prey eigenvalue hits -1."""
    return (3.0 + math.sqrt(8.0 * w + 9.0)) / 2.0


def _compare(a: float, b: float, tol: float) -> int:
    """-1, 0 or 1 as a is below, within tol of, or above b."""
    if abs(a - b) <= tol:
        return 0
    return -1 if a < b else 1


def _combine(first: int, second: int, details=(PLUS_ONE, PLUS_ONE)) -> StabilityKind:
    # each argument: -1 stable direction, 1 unstable, 0 on the unit circle
    if first == 0:
        return StabilityKind(Stability.NONHYPERBOLIC, details[0])
    if second == 0:
        return StabilityKind(Stability.NONHYPERBOLIC, details[1])
    if first < 0 and second < 0:
        return StabilityKind(Stability.SINK)
    if first > 0 and second > 0:
        return StabilityKind(Stability.SOURCE)
    return StabilityKind(Stability.SADDLE)


def _predator_direction(p: Parameters, x: float, tol: float) -> int:
    """Stability of the predator eigenvalue exp(beta x/(1 + alpha x) - theta) on y = 0."""
    denom = p.beta - p.alpha * p.theta
    if not denom > 0:
        # beta <= alpha*theta: the predator always declines on the prey axis
        return -1
    ratio = p.theta / denom
    return _compare(x, ratio, tol)


def classify_boundary_analytic(p: Parameters, which: str,
                               tol: float = HYPERBOLIC_MARGIN) -> StabilityKind:
    """Classify E0, Es or E1 from the closed-form stability inequalities.

    ``tol`` is the width within which an inequality is treated as an
    equality, yielding a non-hyperbolic verdict.
    """
    if which == "E0":
        # eigenvalues exp(-s/w) and exp(-theta) < 1
        return _combine(-_compare(p.s, 0.0, tol), -1)
    if which == "E1":
        # prey eigenvalue 1 + (s-1)/(1+w): inside the unit circle iff -2w-1 < s < 1
        if _compare(p.s, 1.0, tol) == 0 or _compare(p.s, -2 * p.w - 1, tol) == 0:
            prey = 0
        elif -2 * p.w - 1 < p.s < 1.0:
            prey = -1
        else:
            prey = 1
        detail = PLUS_ONE if _compare(p.s, 1.0, tol) == 0 else MINUS_ONE
        return _combine(prey, _predator_direction(p, 1.0, tol), (detail, PLUS_ONE))
    if which == "Es":
        if not p.s > COINCIDENCE_TOL:
            raise AbsentFixedPoint("Es requires s > 0")
        s_plus = es_upper_root(p.w)
        # prey eigenvalue 1 - s(s-1)/(s+w): inside the unit circle iff 1 < s < s_plus
        if _compare(p.s, 1.0, tol) == 0 or _compare(p.s, s_plus, tol) == 0:
            prey = 0
        elif 1.0 < p.s < s_plus:
            prey = -1
        else:
            prey = 1
        detail = PLUS_ONE if _compare(p.s, 1.0, tol) == 0 else MINUS_ONE
        return _combine(prey, _predator_direction(p, p.s, tol), (detail, PLUS_ONE))
    if which == "Eplus":
        return classify_interior_analytic(p, tol)
    raise AbsentFixedPoint(f"unknown fixed point {which!r}")


def interior_trace_det(p: Parameters) -> tuple[float, float]:
    """Closed-form trace and determinant of the Jacobian at E+."""
    st = coexistence_point(p)
    if st is None:
        raise AbsentFixedPoint(f"Eplus does not exist for {p}")
    x, y = st
    s, w, alpha, beta = p.s, p.w, p.alpha, p.beta
    sat = 1.0 + alpha * x
    j11 = 1.0 - x + (s + w + s * w + w * w) * x / (x + w) ** 2 + alpha * x * y / sat**2
    tr = 1.0 + j11
    det = j11 + beta * x * y / sat**3
    return tr, det


def classify_interior_analytic(p: Parameters, tol: float = HYPERBOLIC_MARGIN) -> StabilityKind:
    """Classify E+ through F(lambda) = lambda^2 + B lambda + C, with F(1) > 0."""
    tr, det = interior_trace_det(p)
    b, c = -tr, det
    f_minus = 1.0 - b + c
    if abs(f_minus) <= tol:
        return StabilityKind(Stability.NONHYPERBOLIC, MINUS_ONE)
    if f_minus < 0:
        return StabilityKind(Stability.SADDLE)
    if abs(c - 1.0) <= tol:
        detail = COMPLEX_PAIR if -2.0 < b < 2.0 else PLUS_ONE
        return StabilityKind(Stability.NONHYPERBOLIC, detail)
    return StabilityKind(Stability.SINK if c < 1.0 else Stability.SOURCE)


def characteristic_at_one(p: Parameters) -> float:
    """F(1) = 1 - tr + det at E+; positive wherever E+ exists."""
    tr, det = interior_trace_det(p)
    return 1.0 - tr + det
