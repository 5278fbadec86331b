"""
Fundamental solution of ∂_t u = ∂_x^n u, n = 2j + 1, at t = 1:

    K(x) = (1/π) ∫_0^∞ cos(x ξ + ξ^n) dξ

decaying super-exponentially for x > 0 and oscillating with algebraic decay
for x < 0. The reversed convention ∂_t u + ∂_x^n u = 0 has kernel K(-x).

Direct evaluation cuts [0, Ξ] into panels on which the phase ψ = xξ + ξ^n
advances by π/2, integrates each panel with Gauss-Legendre, and replaces
∫_Ξ^∞ by two integrations by parts. Ξ lies `OSCILLATIONS` full turns of the
phase past the stationary point.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import airy, gamma

from core.app_settings import lab_settings
from core.services.base import NumericalDefect, ValidationError

logger = logging.getLogger(__name__)

SUPPORTED_J = (1, 2)

# e^{-r^n} is below the smallest double past r^n = 745
UNDERFLOW_EXPONENT = 745.0

BISECTION_STEPS = 64


def phase_order(j: int) -> int:
    """n = 2j + 1 for the supported hierarchy members."""
    if j not in SUPPORTED_J:
        raise ValidationError("kernel is implemented for j = 1 and j = 2", {'j': j})
    return 2 * j + 1


@dataclass(frozen=True)
class Phase:
    """ψ(ξ) = xξ + ξ^n and its first three derivatives."""
    x: float
    n: int

    def __call__(self, xi):
        return self.x * xi + xi ** self.n

    def d1(self, xi):
        return self.x + self.n * xi ** (self.n - 1)

    def d2(self, xi):
        return self.n * (self.n - 1) * xi ** (self.n - 2)

    def d3(self, xi):
        return self.n * (self.n - 1) * (self.n - 2) * xi ** (self.n - 3)

    @property
    def stationary(self) -> float:
        """Stationary point on (0, ∞) for x < 0, else 0."""
        return (-self.x / self.n) ** (1.0 / (self.n - 1)) if self.x < 0 else 0.0


@lru_cache(maxsize=8)
def _gauss(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return leggauss(nodes)


def _invert(phase: Phase, levels: np.ndarray, lo: float, hi: float, increasing: bool) -> np.ndarray:
    """Points where ψ crosses each level on a monotone branch [lo, hi]."""
    left = np.full(levels.shape, lo)
    right = np.full(levels.shape, hi)
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (left + right)
        below = phase(mid) < levels
        past = ~below if increasing else below
        right = np.where(past, mid, right)
        left = np.where(past, left, mid)
    return 0.5 * (left + right)


def _levels_between(low: float, high: float) -> np.ndarray:
    """Multiples of π/2 strictly inside (low, high), increasing."""
    step = 0.5 * np.pi
    first = math.floor(low / step) + 1
    last = math.ceil(high / step) - 1
    return step * np.arange(first, last + 1, dtype=float)


def _cutoff(phase: Phase, oscillations: int) -> float:
    start = phase.stationary
    target = phase(start) + 2.0 * np.pi * oscillations
    hi = start + 1.0
    while phase(hi) < target:
        hi *= 2.0
    return brentq(lambda s: phase(s) - target, start, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def panel_edges(phase: Phase, cutoff: float) -> np.ndarray:
    """0, the π/2 level crossings on both monotone branches, ξ_s and Ξ."""
    xi_s = phase.stationary
    pieces = [np.array([0.0])]
    if xi_s > 0:
        down = _levels_between(phase(xi_s), 0.0)[::-1]
        pieces.append(_invert(phase, down, 0.0, xi_s, increasing=False))
        pieces.append(np.array([xi_s]))
    up = _levels_between(phase(xi_s), phase(cutoff))
    pieces.append(_invert(phase, up, xi_s, cutoff, increasing=True))
    pieces.append(np.array([cutoff]))
    return np.unique(np.concatenate(pieces))


def _panel_sum(phase: Phase, edges: np.ndarray, nodes: int) -> float:
    t, w = _gauss(nodes)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    xi = 0.5 * (a + b)[:, None] + half[:, None] * t[None, :]
    return float(np.sum((np.cos(phase(xi)) @ w) * half))


def _tail(phase: Phase, cutoff: float) -> Tuple[float, float]:
    """∫_Ξ^∞ cos ψ by two integrations by parts, and the size of the next term."""
    p1, p2, p3 = phase.d1(cutoff), phase.d2(cutoff), phase.d3(cutoff)
    value = -math.sin(phase(cutoff)) / p1 + math.cos(phase(cutoff)) * p2 / p1 ** 3
    error = abs(p3 / p1 ** 3 - 3.0 * p2 ** 2 / p1 ** 4) / p1
    return value, error


def kernel_direct(x: float, j: int = 2) -> Tuple[float, float]:
    """
    K(x) by panel quadrature plus analytic tail.

    Returns:
        (value, absolute error estimate)

    Raises:
        ValidationError: If j is unsupported
        NumericalDefect: If |x| is outside the validity window
    """
    n = phase_order(j)
    conf = lab_settings.KERNEL
    window = conf['VALIDITY_WINDOW']
    if not abs(x) <= window:
        raise NumericalDefect(
            "kernel requested outside its validity window",
            {'x': x, 'window': window},
        )
    phase = Phase(float(x), n)
    cutoff = _cutoff(phase, conf['OSCILLATIONS'])
    edges = panel_edges(phase, cutoff)
    fine = _panel_sum(phase, edges, conf['GAUSS_NODES'])
    coarse = _panel_sum(phase, edges, conf['GAUSS_NODES'] // 2)
    tail, tail_error = _tail(phase, cutoff)
    if tail_error > conf['TAIL_TOLERANCE']:
        logger.warning("kernel tail remainder %.2e at x=%s above tolerance", tail_error, x)
    value = (fine + tail) / np.pi
    error = (abs(fine - coarse) + tail_error) / np.pi
    return value, error


def kernel_eval(x, j: int = 2, reverse: bool = False):
    """
    K_j(x) for the convention ∂_t u = ∂_x^{2j+1} u (decay on the right).

    Args:
        x: Point or array of points
        j: Hierarchy index, 1 or 2
        reverse: Use the convention ∂_t u + ∂_x^{2j+1} u = 0, i.e. K(-x)

    Returns:
        Kernel value(s), same shape as x
    """
    sign = -1.0 if reverse else 1.0
    if np.ndim(x) == 0:
        return kernel_direct(sign * float(x), j)[0]
    flat = np.asarray(x, dtype=float).ravel()
    out = np.array([kernel_direct(sign * v, j)[0] for v in flat])
    return out.reshape(np.shape(x))


def kernel_contour(x: float, j: int = 2) -> Tuple[float, float]:
    """
    K(x) for x >= 0 on the ray arg ξ = π/(2n), where the integrand is
    exp(ixre^{iθ} - r^n) and no longer oscillates.

    Returns:
        (value, absolute error estimate)
    """
    n = phase_order(j)
    if x < 0:
        raise ValidationError("contour evaluation needs x >= 0", {'x': x})
    rot = np.exp(0.5j * np.pi / n)
    reach = UNDERFLOW_EXPONENT ** (1.0 / n)

    def integrand(r):
        return (rot * np.exp(1j * x * r * rot - r ** n)).real

    value, error = quad(integrand, 0.0, reach, epsabs=1e-15, epsrel=1e-13, limit=400)
    return value / np.pi, error / np.pi


def _complex_quad(f, upper: float) -> complex:
    re = quad(lambda r: f(r).real, 0.0, upper, epsabs=1e-16, epsrel=1e-13, limit=400)[0]
    im = quad(lambda r: f(r).imag, 0.0, upper, epsabs=1e-16, epsrel=1e-13, limit=400)[0]
    return complex(re, im)


def kernel_envelope(x: float, j: int = 2) -> float:
    """
    Modulus of the single-saddle part of K on x > 0.

    For j = 2 the contour on arg ξ = π/10 equals the contour on the
    imaginary axis (purely imaginary, no contribution to K) plus one saddle
    contribution W; K = Re W / π and |W| / π is a smooth envelope of |K|.
    For j = 1 the kernel does not oscillate and is its own envelope.
    """
    n = phase_order(j)
    if not x > 0:
        raise ValidationError("envelope is defined for x > 0", {'x': x})
    if j == 1:
        return abs(kernel_contour(x, j)[0])
    rot = np.exp(0.5j * np.pi / n)
    reach = UNDERFLOW_EXPONENT ** (1.0 / n)
    ray = rot * _complex_quad(lambda r: np.exp(1j * x * r * rot - r ** n), reach)
    axis = 1j * quad(lambda s: np.exp(-x * s - s ** n), 0.0, reach,
                     epsabs=1e-16, epsrel=1e-13, limit=400)[0]
    return abs(ray - axis) / np.pi


def kernel_at_time(x, t: float, j: int = 2):
    """Self-similar kernel t^{-1/n} K(x t^{-1/n}) of the flow at time t > 0."""
    if not t > 0:
        raise ValidationError("time must be positive", {'t': t})
    scale = t ** (-1.0 / phase_order(j))
    return scale * kernel_eval(np.asarray(x, dtype=float) * scale, j)


def predicted_right_rate(j: int = 2) -> float:
    """
    Saddle-point rate c in K(x) ≈ e^{-c x^{n/(n-1)}}:
    c = (n - 1) sin(π/(n - 1)) / n^{n/(n-1)}.
    """
    n = phase_order(j)
    return (n - 1) * math.sin(math.pi / (n - 1)) / n ** (n / (n - 1))


def kernel_at_zero(j: int = 2) -> float:
    """K(0) = Γ(1 + 1/n) cos(π/(2n)) / π."""
    n = phase_order(j)
    return gamma(1.0 + 1.0 / n) * math.cos(math.pi / (2 * n)) / math.pi


def airy_kernel(x):
    """K_1(x) = 3^{-1/3} Ai(3^{-1/3} x)."""
    scale = 3.0 ** (-1.0 / 3.0)
    return scale * airy(scale * np.asarray(x, dtype=float))[0]
