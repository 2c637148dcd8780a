"""Neimark-Sacker bifurcations of the coexistence equilibrium E+.

The critical value of any one parameter is the root of ``det J(E+) - 1``
with complex eigenvalues.  At that point the map is shifted to put E+ at
the origin, expanded to third order, brought to rotation form and reduced to
the real coefficient ``sigma_star`` whose sign decides whether the invariant
closed curve born at the bifurcation attracts or repels.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    AbsentFixedPoint,
    DegenerateSigma,
    DiscriminantNonNegative,
    ExistenceLost,
    NoSignChange,
    NotCritical,
)
from .fixed_points import coexistence_point, interior_trace_det
from .model import PARAM_NAMES, Parameters, State
from .series import Series

ROOT_TOL = 1e-12
CRITICAL_TOL = 1e-8
RESONANCE_TOL = 1e-6
SIGMA_TOL = 1e-8
#: Excluded values of -tr(J) at criticality (eigenvalues that are 1st-4th roots of unity).
RESONANT_M1 = (-2.0, 0.0, 1.0, 2.0)

_COEFF_INDEX = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]


@dataclass(frozen=True)
class TaylorCoeffs:
    """Third-order expansion of the map shifted so that E+ sits at the origin.

    ``prey[i, j]`` and ``predator[i, j]`` multiply ``u**i v**j`` where
    ``u = x - x+`` and ``v = y - y+``.  ``z1``, ``z2``, ``z3`` are the
    auxiliary derivatives of the exponents at E+:
    ``z1 = -d/dx`` of the prey exponent, ``z2 = d/dx`` of the predator
    exponent, ``z3 = -(1/2) d^2/dx^2`` of the prey exponent.
    """

    prey: np.ndarray
    predator: np.ndarray
    z1: float
    z2: float
    z3: float
    location: State

    def __getattr__(self, name):
        # s10 ... s03 and t10 ... t03
        if len(name) == 3 and name[0] in "st" and name[1:].isdigit():
            i, j = int(name[1]), int(name[2])
            table = self.prey if name[0] == "s" else self.predator
            return float(table[i, j])
        raise AttributeError(name)

    def as_dict(self) -> dict:
        out = {}
        for prefix, table in (("s", self.prey), ("t", self.predator)):
            for i, j in _COEFF_INDEX:
                out[f"{prefix}{i}{j}"] = float(table[i, j])
        out.update(z1=self.z1, z2=self.z2, z3=self.z3)
        return out

    def linear_part(self) -> np.ndarray:
        return np.array([[self.s10, self.s01], [self.t10, self.t01]])

    def cubic_model(self, u: float, v: float) -> tuple[float, float]:
        return Series(self.prey)(u, v), Series(self.predator)(u, v)


@dataclass(frozen=True)
class NSConditions:
    detJ: float
    trJ: float
    discriminant: float
    M1_0: float
    transversality: float
    resonance_ok: bool

    @property
    def transversal(self) -> bool:
        return self.transversality != 0.0 and math.isfinite(self.transversality)


class Direction(str, Enum):
    ATTRACTING_CURVE_BEYOND = "attracting-curve-beyond"
    REPELLING_CURVE_BELOW = "repelling-curve-below"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class NormalFormReport:
    critical_value: float | None
    param: str | None
    eigen_pair: complex
    gammas: dict
    sigma_star: float
    direction: Direction
    psi: dict = field(repr=False)
    phi: dict = field(repr=False)


def _require_interior(p: Parameters) -> State:
    st = coexistence_point(p)
    if st is None:
        raise AbsentFixedPoint(f"Eplus does not exist for {p}")
    return st


def shifted_series(p: Parameters, order: int = 3) -> tuple[Series, Series, State]:
    """Taylor series of the map about E+, in shifted coordinates (u, v)."""
    xp, yp = _require_interior(p)
    x = Series.linear(1.0, 0.0, const=xp, order=order)
    y = Series.linear(0.0, 1.0, const=yp, order=order)
    sat = 1.0 + x * p.alpha
    prey_exp = (1.0 - x) * (x - p.s) / (x + p.w) - y / sat
    pred_exp = x * p.beta / sat - p.theta
    f = x * prey_exp.exp() - xp
    g = y * pred_exp.exp() - yp
    # the constant terms are fixed-point residuals; E+ is exact by construction
    f.c[0, 0] = 0.0
    g.c[0, 0] = 0.0
    return f, g, State(xp, yp)


def shifted_map(p: Parameters, u: float, v: float) -> tuple[float, float]:
    """Exact map in coordinates centred on E+."""
    xp, yp = _require_interior(p)
    x, y = xp + u, yp + v
    sat = 1.0 + p.alpha * x
    fx = x * math.exp((1.0 - x) * (x - p.s) / (x + p.w) - y / sat)
    gy = y * math.exp(p.beta * x / sat - p.theta)
    return fx - xp, gy - yp


def taylor_coefficients(p: Parameters) -> TaylorCoeffs:
    f, g, st = shifted_series(p)
    x, y = st
    sat = 1.0 + p.alpha * x
    z1 = 1.0 - (1.0 + p.w) * (p.s + p.w) / (x + p.w) ** 2 - p.alpha * y / sat**2
    z2 = p.beta / sat**2
    z3 = (1.0 + p.w) * (p.s + p.w) / (x + p.w) ** 3 + p.alpha**2 * y / sat**3
    return TaylorCoeffs(f.c.copy(), g.c.copy(), z1, z2, z3, st)


def det_minus_one(p: Parameters) -> float:
    _, det = interior_trace_det(p)
    return det - 1.0


def _g(p: Parameters, which: str, v: float) -> float:
    q = p.with_value(which, v)
    if coexistence_point(q) is None:
        raise ExistenceLost(f"Eplus disappears at {which}={v!r}")
    return det_minus_one(q)


def ns_locate(p: Parameters, which: str, bracket, tol: float = ROOT_TOL,
              samples: int = 33) -> float:
    """Critical value of ``which`` where det J(E+) = 1 inside ``bracket``.

    Bisection on ``det J(E+) - 1`` followed by one secant polish step.
    """
    if which not in PARAM_NAMES:
        raise ValueError(f"unknown parameter {which!r}")
    lo, hi = sorted(float(b) for b in bracket)
    # E+ must exist across the bracket, not only at its ends
    for v in np.linspace(lo, hi, samples):
        _g(p, which, v)
    glo, ghi = _g(p, which, lo), _g(p, which, hi)
    if glo == 0.0:
        root = lo
    elif ghi == 0.0:
        root = hi
    else:
        if (glo > 0) == (ghi > 0):
            raise NoSignChange(
                f"det(J)-1 has the same sign at {which}={lo!r} and {which}={hi!r}")
        a, b, ga, gb = lo, hi, glo, ghi
        while True:
            mid = 0.5 * (a + b)
            gm = _g(p, which, mid)
            if abs(gm) <= tol or not (a < mid < b):
                break
            if (gm > 0) == (ga > 0):
                a, ga = mid, gm
            else:
                b, gb = mid, gm
        root = mid
        if gb != ga:
            polished = a - ga * (b - a) / (gb - ga)
            if lo <= polished <= hi:
                gp = _g(p, which, polished)
                if abs(gp) < abs(gm):
                    root = polished
    q = p.with_value(which, root)
    tr, det = interior_trace_det(q)
    if tr * tr - 4.0 * det >= 0:
        raise DiscriminantNonNegative(
            f"det(J)=1 at {which}={root!r} but the eigenvalues are real")
    return root


def ns_nondegeneracy(p: Parameters, which: str, h: float = 1e-6) -> NSConditions:
    """Transversality and non-resonance checks at a critical parameter set."""
    _require_interior(p)
    tr, det = interior_trace_det(p)
    disc = tr * tr - 4.0 * det
    if abs(det - 1.0) > CRITICAL_TOL or disc >= 0:
        raise NotCritical(f"not a Neimark-Sacker point: det(J)={det!r}, tr^2-4det={disc!r}")
    v = getattr(p, which)

    def modulus(val):
        _, d = interior_trace_det(p.with_value(which, val))
        return math.sqrt(d)

    speed = (modulus(v + h) - modulus(v - h)) / (2 * h)
    m1 = -tr
    resonance_ok = min(abs(m1 - r) for r in RESONANT_M1) > RESONANCE_TOL
    return NSConditions(det, tr, disc, m1, speed, resonance_ok)


def rotation_form(tc: TaylorCoeffs) -> tuple[float, float, np.ndarray]:
    """Critical eigenvalue ``eta1 + i eta2`` and the change of basis to (X, Y)."""
    eta1 = (tc.s10 + tc.t01) / 2.0
    if abs(eta1) >= 1.0:
        raise NotCritical(f"trace {2 * eta1!r} admits no unit-circle complex pair")
    eta2 = math.sqrt(1.0 - eta1 * eta1)
    basis = np.array([[tc.s01, 0.0], [eta1 - tc.s10, eta2]])
    return eta1, eta2, basis


def transformed_nonlinearity(tc: TaylorCoeffs) -> tuple[Series, Series, float, float]:
    """Quadratic plus cubic terms (psi, phi) of the map in (X, Y) coordinates.

    With ``(u, v) = M (X, Y)`` the linear part becomes
    ``[[eta1, eta2], [-eta2, eta1]]``.
    """
    eta1, eta2, m = rotation_form(tc)
    f_nl = Series(tc.prey).homogeneous((2, 3)).compose_linear(*m.ravel())
    g_nl = Series(tc.predator).homogeneous((2, 3)).compose_linear(*m.ravel())
    minv = np.linalg.inv(m)
    psi = f_nl * minv[0, 0] + g_nl * minv[0, 1]
    phi = f_nl * minv[1, 0] + g_nl * minv[1, 1]
    return psi, phi, eta1, eta2


_PARTIALS = {"XX": (2, 0), "XY": (1, 1), "YY": (0, 2),
             "XXX": (3, 0), "XXY": (2, 1), "XYY": (1, 2), "YYY": (0, 3)}


def _partials(ser: Series) -> dict:
    return {k: ser.partial(*ij) for k, ij in _PARTIALS.items()}


def gamma_coefficients(psi: dict, phi: dict) -> dict:
    """Complex coefficients from the partials of the nonlinear terms.

    Expects the orientation in which the linear part is
    ``[[eta1, -eta2], [eta2, eta1]]``.
    """
    f, g = psi, phi
    return {
        "gamma20": complex(f["XX"] - f["YY"] + 2 * g["XY"], g["XX"] - g["YY"] - 2 * f["XY"]) / 8,
        "gamma11": complex(f["XX"] + f["YY"], g["XX"] + g["YY"]) / 4,
        "gamma02": complex(f["XX"] - f["YY"] - 2 * g["XY"], g["XX"] - g["YY"] + 2 * f["XY"]) / 8,
        "gamma21": complex(f["XXX"] + f["XYY"] + g["XXY"] + g["YYY"],
                           g["XXX"] + g["XYY"] - f["XXY"] - f["YYY"]) / 16,
    }


def sigma_from_gammas(lam: complex, gammas: dict) -> float:
    g20, g11, g02, g21 = (gammas[k] for k in ("gamma20", "gamma11", "gamma02", "gamma21"))
    lbar = lam.conjugate()
    return (-((1 - 2 * lam) * lbar**2 / (1 - lam) * g11 * g20).real
            - 0.5 * abs(g11) ** 2 - abs(g02) ** 2 + (lbar * g21).real)


def _reflect(psi: dict, phi: dict) -> tuple[dict, dict]:
    # Y -> -Y turns [[e1, e2], [-e2, e1]] into [[e1, -e2], [e2, e1]]
    def odd_in_y(key):
        return key.count("Y") % 2 == 1
    psi_r = {k: (-v if odd_in_y(k) else v) for k, v in psi.items()}
    phi_r = {k: (v if odd_in_y(k) else -v) for k, v in phi.items()}
    return psi_r, phi_r


def normal_form(p: Parameters, which: str | None = None,
                sigma_tol: float = SIGMA_TOL) -> NormalFormReport:
    """Normal-form coefficient ``sigma_star`` at a Neimark-Sacker point of E+.

    ``sigma_star < 0``: an attracting closed curve appears on the unstable
    side of the critical value.  ``sigma_star > 0``: a repelling curve exists
    on the stable side.
    """
    _require_interior(p)
    tr, det = interior_trace_det(p)
    if abs(det - 1.0) > CRITICAL_TOL or tr * tr - 4.0 * det >= 0:
        raise NotCritical(f"not a Neimark-Sacker point: det(J)={det!r}")
    tc = taylor_coefficients(p)
    psi_ser, phi_ser, eta1, eta2 = transformed_nonlinearity(tc)
    psi, phi = _partials(psi_ser), _partials(phi_ser)
    lam = complex(eta1, eta2)
    gammas = gamma_coefficients(*_reflect(psi, phi))
    sigma = sigma_from_gammas(lam, gammas)
    if abs(sigma) <= sigma_tol:
        raise DegenerateSigma(f"sigma_star={sigma!r} is zero to tolerance")
    direction = (Direction.ATTRACTING_CURVE_BEYOND if sigma < 0
                 else Direction.REPELLING_CURVE_BELOW)
    return NormalFormReport(
        critical_value=None if which is None else getattr(p, which),
        param=which,
        eigen_pair=lam,
        gammas=gammas,
        sigma_star=sigma,
        direction=direction,
        psi=psi,
        phi=phi,
    )


def critical_multiplier(p: Parameters) -> complex:
    """Eigenvalue of J(E+) with positive imaginary part."""
    tr, det = interior_trace_det(p)
    return complex(tr / 2, 0) + cmath.sqrt(tr * tr - 4 * det) / 2
