"""
Smooth cutoff η and truncated Taylor (jet) arithmetic.

η rises from 0 on x <= 1/2 to 1 on x >= 3/4:

    η(x) = 1 / (1 + exp(1/s - 1/(1 - s))),   s = (x - 1/2) / (1/4)

which equals f(s) / (f(s) + f(1 - s)) with f(s) = exp(-1/s). Derivatives
up to order 5 are propagated through `Jet`, a vectorized truncated Taylor
series; no closed form is written out by hand.
"""

from math import factorial
from typing import Union

import numpy as np

Number = Union[float, np.ndarray]

# |1/s - 1/(1-s)| beyond this is treated as a flat cutoff
FLAT_EXPONENT = 600.0


class Jet:
    """
    Taylor coefficients c[n] of f(x0 + h) = sum_n c[n] h^n, n <= order.

    `coeffs` has shape (order + 1, *x0.shape).
    """

    __slots__ = ('coeffs',)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, x0: Number, order: int = 5) -> 'Jet':
        x0 = np.asarray(x0, dtype=float)
        coeffs = np.zeros((order + 1,) + x0.shape)
        coeffs[0] = x0
        if order >= 1:
            coeffs[1] = 1.0
        return cls(coeffs)

    @classmethod
    def constant(cls, value: Number, order: int = 5, shape=()) -> 'Jet':
        coeffs = np.zeros((order + 1,) + tuple(shape))
        coeffs[0] = value
        return cls(coeffs)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def derivative(self, j: int) -> np.ndarray:
        return self.coeffs[j] * factorial(j)

    def derivatives(self) -> np.ndarray:
        scale = np.array([factorial(n) for n in range(self.order + 1)], dtype=float)
        return self.coeffs * scale.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def _lift(self, other) -> 'Jet':
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order, self.coeffs.shape[1:])

    def __add__(self, other):
        return Jet(self.coeffs + self._lift(other).coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs)

    def __sub__(self, other):
        return Jet(self.coeffs - self._lift(other).coeffs)

    def __rsub__(self, other):
        return Jet(self._lift(other).coeffs - self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * np.asarray(other, dtype=float))
        a, b = self.coeffs, other.coeffs
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        for n in range(self.order + 1):
            for k in range(n + 1):
                out[n] += a[k] * b[n - k]
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self) -> 'Jet':
        f = self.coeffs
        h = np.zeros_like(f)
        h[0] = 1.0 / f[0]
        for n in range(1, self.order + 1):
            acc = np.zeros_like(f[0])
            for k in range(1, n + 1):
                acc += f[k] * h[n - k]
            h[n] = -acc * h[0]
        return Jet(h)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs / np.asarray(other, dtype=float))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def exp(self) -> 'Jet':
        f = self.coeffs
        g = np.zeros_like(f)
        g[0] = np.exp(f[0])
        for n in range(1, self.order + 1):
            acc = np.zeros_like(f[0])
            for k in range(1, n + 1):
                acc += k * f[k] * g[n - k]
            g[n] = acc / n
        return Jet(g)

    def shifted_exp(self) -> 'Jet':
        """exp(f - f(x0)): the Taylor ratios of exp(f) with value 1."""
        centred = self.coeffs.copy()
        centred[0] = 0.0
        return Jet(centred).exp()

    def log(self) -> 'Jet':
        f = self.coeffs
        g = np.zeros_like(f)
        g[0] = np.log(f[0])
        for n in range(1, self.order + 1):
            acc = np.zeros_like(f[0])
            for k in range(1, n):
                acc += k * g[k] * f[n - k]
            g[n] = (f[n] - acc / n) / f[0]
        return Jet(g)

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = Jet.constant(1.0, self.order, self.coeffs.shape[1:])
            for _ in range(p):
                out = out * self
            return out
        return (self.log() * float(p)).exp()


def eta_jet(x: Number, order: int = 5, start: float = 0.5, end: float = 0.75) -> Jet:
    """Jet of the cutoff η at the points x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    coeffs = np.zeros((order + 1,) + x.shape)
    coeffs[0] = np.where(x >= end, 1.0, 0.0)

    width = end - start
    s = (x - start) / width
    inside = (s > 0) & (s < 1)
    if np.any(inside):
        s_in = s[inside]
        exponent = 1.0 / s_in - 1.0 / (1.0 - s_in)
        live = np.abs(exponent) < FLAT_EXPONENT
        # flat ends: derivatives below exp(-600)
        coeffs[0][np.flatnonzero(inside)[~live]] = np.where(exponent[~live] > 0, 0.0, 1.0)
        if np.any(live):
            sj = Jet.variable(s_in[live], order)
            z = sj.reciprocal() - (1.0 - sj).reciprocal()
            eta = (1.0 + z.exp()).reciprocal()
            # chain rule for s = (x - start)/width
            scale = width ** -np.arange(order + 1, dtype=float)
            idx = np.flatnonzero(inside)[live]
            coeffs[:, idx] = eta.coeffs * scale[:, None]
    return Jet(coeffs)


def eta(x: Number, j: int = 0) -> Number:
    """j-th derivative of the cutoff, j = 0..5."""
    out = eta_jet(x).derivative(j)
    return float(out[0]) if np.ndim(x) == 0 else out
