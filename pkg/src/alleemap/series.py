"""Truncated bivariate Taylor series.

A :class:`Series` stores the coefficients ``c[i, j]`` of ``u**i * v**j`` for
``i + j <= order``.  Products, reciprocals and exponentials are truncated at
the same total order, which makes the coefficients of a composite expression
equal to its exact Taylor coefficients at the origin.
"""

from __future__ import annotations

import math

import numpy as np


class Series:
    __slots__ = ("c", "order")

    def __init__(self, coeffs, order: int = 3):
        c = np.zeros((order + 1, order + 1))
        src = np.asarray(coeffs, dtype=float)
        n = min(src.shape[0], order + 1)
        m = min(src.shape[1], order + 1)
        c[:n, :m] = src[:n, :m]
        self.c = c
        self.order = order
        self._truncate()

    def _truncate(self):
        i, j = np.indices(self.c.shape)
        self.c[i + j > self.order] = 0.0

    @classmethod
    def constant(cls, value: float, order: int = 3) -> "Series":
        return cls([[value]], order)

    @classmethod
    def linear(cls, a: float, b: float, const: float = 0.0, order: int = 3) -> "Series":
        """``const + a*u + b*v``."""
        c = np.zeros((2, 2))
        c[0, 0], c[1, 0], c[0, 1] = const, a, b
        return cls(c, order)

    def _coerce(self, other):
        if isinstance(other, Series):
            return other
        return Series.constant(float(other), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return Series(self.c + other.c, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Series(-self.c, self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series(self.c * float(other), self.order)
        n = self.order + 1
        out = np.zeros((n, n))
        a, b = self.c, other.c
        for i in range(n):
            for j in range(n - i):
                if a[i, j] == 0.0:
                    continue
                out[i:, j:] += a[i, j] * b[: n - i, : n - j]
        return Series(out, self.order)

    __rmul__ = __mul__

    @property
    def const(self) -> float:
        return float(self.c[0, 0])

    def _nilpotent_power_sum(self, weights):
        # sum_k weights[k] * r**k for r = self - const, which vanishes at order+1
        r = self - self.const
        term = Series.constant(1.0, self.order)
        total = Series.constant(weights[0], self.order)
        for k in range(1, self.order + 1):
            term = term * r
            total = total + term * weights[k]
        return total

    def reciprocal(self) -> "Series":
        a = self.const
        if a == 0.0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        return self._nilpotent_power_sum([(-1.0) ** k / a ** (k + 1) for k in range(self.order + 1)])

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return Series(self.c / float(other), self.order)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def exp(self) -> "Series":
        e = math.exp(self.const)
        return self._nilpotent_power_sum([e / math.factorial(k) for k in range(self.order + 1)])

    def __call__(self, u, v):
        i, j = np.indices(self.c.shape)
        return float(np.sum(self.c * np.power(u, i) * np.power(v, j)))

    def compose_linear(self, a11: float, a12: float, a21: float, a22: float) -> "Series":
        """Substitute ``u = a11 X + a12 Y`` and ``v = a21 X + a22 Y``."""
        U = Series.linear(a11, a12, order=self.order)
        V = Series.linear(a21, a22, order=self.order)
        out = Series.constant(0.0, self.order)
        upow = [Series.constant(1.0, self.order)]
        vpow = [Series.constant(1.0, self.order)]
        for _ in range(self.order):
            upow.append(upow[-1] * U)
            vpow.append(vpow[-1] * V)
        for i in range(self.order + 1):
            for j in range(self.order + 1 - i):
                if self.c[i, j] != 0.0:
                    out = out + upow[i] * vpow[j] * self.c[i, j]
        return out

    def partial(self, i: int, j: int) -> float:
        """``d^(i+j) / du^i dv^j`` at the origin."""
        return float(self.c[i, j]) * math.factorial(i) * math.factorial(j)

    def homogeneous(self, degrees) -> "Series":
        """Keep only terms whose total degree is in ``degrees``."""
        i, j = np.indices(self.c.shape)
        mask = np.isin(i + j, list(degrees))
        return Series(np.where(mask, self.c, 0.0), self.order)
