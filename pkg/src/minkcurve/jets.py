"""Truncated Taylor series ("jets") in a local variable.

A ``Series`` stores normalised Taylor coefficients ``c[..., k] = f^(k)(0)/k!``
along its last axis.  Leading axes broadcast, so a stack of 4-vectors is held
with shape ``(P, 4, n+1)`` and a stack of scalars with shape ``(P, 1, n+1)``.
Every operation truncates to the smaller order of its operands.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .lorentz import METRIC


class Series:
    __slots__ = ("c",)

    def __init__(self, c):
        self.c = np.asarray(c, dtype=float)

    @classmethod
    def from_derivatives(cls, d) -> "Series":
        d = np.asarray(d, dtype=float)
        n = d.shape[-1]
        return cls(d / np.array([factorial(k) for k in range(n)]))

    @property
    def order(self) -> int:
        return self.c.shape[-1] - 1

    @property
    def value(self) -> np.ndarray:
        return self.c[..., 0]

    def derivatives(self) -> np.ndarray:
        n = self.c.shape[-1]
        return self.c * np.array([factorial(k) for k in range(n)])

    def component(self, i: int) -> "Series":
        return Series(self.c[..., i:i + 1, :])

    def components(self) -> list["Series"]:
        return [self.component(i) for i in range(self.c.shape[-2])]

    @staticmethod
    def stack(parts: list["Series"]) -> "Series":
        n = min(p.order for p in parts)
        return Series(np.concatenate([p.c[..., :n + 1] for p in parts], axis=-2))

    def truncate(self, order: int) -> "Series":
        return Series(self.c[..., :order + 1])

    def _pair(self, other):
        if isinstance(other, Series):
            n = min(self.order, other.order) + 1
            return self.c[..., :n], other.c[..., :n]
        return self.c, None

    def __add__(self, other):
        a, b = self._pair(other)
        if b is None:
            out = a.copy()
            out[..., 0] = out[..., 0] + other
            return Series(out)
        return Series(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Series(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is None:
            return Series(a * np.asarray(other, dtype=float)[..., None])
        return Series(_cauchy(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "Series":
        b = self.c
        r = np.zeros_like(b)
        r[..., 0] = 1.0 / b[..., 0]
        for k in range(1, b.shape[-1]):
            acc = sum(b[..., i] * r[..., k - i] for i in range(1, k + 1))
            r[..., k] = -acc * r[..., 0]
        return Series(r)

    def sqrt(self) -> "Series":
        a = self.c
        s = np.zeros_like(a)
        s[..., 0] = np.sqrt(a[..., 0])
        for k in range(1, a.shape[-1]):
            acc = sum(s[..., i] * s[..., k - i] for i in range(1, k))
            s[..., k] = (a[..., k] - acc) / (2.0 * s[..., 0])
        return Series(s)

    def deriv(self) -> "Series":
        n = self.c.shape[-1]
        if n < 2:
            raise ValueError("cannot differentiate a series of order 0")
        return Series(self.c[..., 1:] * np.arange(1, n))


def _cauchy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (n,)
    out = np.empty(shape)
    for k in range(n):
        out[..., k] = sum(a[..., i] * b[..., k - i] for i in range(k + 1))
    return out


def mdot(x: Series, y: Series) -> Series:
    """Pseudo scalar product of two vector series, kept as a (…, 1, n) series."""
    n = min(x.order, y.order) + 1
    prod = _cauchy(x.c[..., :n], y.c[..., :n])
    return Series(np.sum(METRIC[:, None] * prod, axis=-2, keepdims=True))
