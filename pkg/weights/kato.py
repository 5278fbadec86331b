"""
Saturated exponential (Kato) weight

    φ_δ(x) = e^{βx} / (1 + δ e^{βx}) = σ / δ,   σ = expit(βx + log δ)

Every x-derivative is a polynomial in σ: with z = βx + log δ,
d^jσ/dz^j = P_j(σ) where P_0 = σ and P_{j+1} = P_j'·(σ - σ²). For j >= 1
P_j carries the factor σ - σ², so

    ∂_x^j φ_δ = β^j w(x) Q_j(σ),   w = σ(1-σ)/δ = e^{βx}/(1 + δe^{βx})².
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import expit, log_expit

from core.services.base import ValidationError

MAX_ORDER = 5

_LOGISTIC = Polynomial([0.0, 1.0, -1.0])


@lru_cache(maxsize=None)
def logistic_polynomials(order: int = MAX_ORDER) -> Tuple[Polynomial, ...]:
    """P_0..P_order with d^jσ/dz^j = P_j(σ)."""
    polys = [Polynomial([0.0, 1.0])]
    for _ in range(order):
        polys.append(polys[-1].deriv() * _LOGISTIC)
    return tuple(polys)


@lru_cache(maxsize=None)
def reduced_polynomials(order: int = MAX_ORDER) -> Tuple[Polynomial, ...]:
    """Q_j = P_j / (σ - σ²) for j >= 1; Q_0 is unused and set to zero."""
    reduced = [Polynomial([0.0])]
    for P in logistic_polynomials(order)[1:]:
        quotient, remainder = divmod(P, _LOGISTIC)
        if np.max(np.abs(remainder.coef)) > 1e-12:
            raise ValueError("logistic polynomial not divisible by σ - σ²")
        reduced.append(quotient)
    return tuple(reduced)


@dataclass(frozen=True)
class KatoWeight:
    """β > 0, 0 < δ < 1."""
    beta: float
    delta: float

    def __post_init__(self):
        errors = {}
        if not self.beta > 0:
            errors['beta'] = "must be positive"
        if not (0 < self.delta < 1):
            errors['delta'] = "must lie in (0, 1)"
        if errors:
            raise ValidationError("Invalid Kato weight", errors)

    def _z(self, x):
        return self.beta * np.asarray(x, dtype=float) + np.log(self.delta)

    def sigma(self, x):
        return expit(self._z(x))

    def value(self, x):
        return self.sigma(x) / self.delta

    def log_value(self, x):
        return log_expit(self._z(x)) - np.log(self.delta)

    def envelope(self, x):
        """w(x) = e^{βx}/(1 + δ e^{βx})², the common factor of all derivatives."""
        s = self.sigma(x)
        return s * (1.0 - s) / self.delta

    def reduced(self, x, j: int):
        """Q_j(σ(x))."""
        return reduced_polynomials()[j](self.sigma(x))

    def derivative(self, x, j: int):
        if j == 0:
            return self.value(x)
        return self.beta ** j * self.envelope(x) * self.reduced(x, j)

    def ratio(self, x):
        """(∂³φ_δ)² / ∂φ_δ = β⁵ w Q_3²."""
        return self.beta ** 5 * self.envelope(x) * self.reduced(x, 3) ** 2

    def master_over_phi(self, x, epsilon: float = 0.0):
        """((3/2)|∂⁵φ_δ| + 25/(4(5-ε)) (∂³φ_δ)²/∂φ_δ) / (β⁵ φ_δ)."""
        s = self.sigma(x)
        q5 = np.abs(self.reduced(x, 5))
        q3 = self.reduced(x, 3)
        return (1.5 * q5 + 25.0 / (4.0 * (5.0 - epsilon)) * q3 ** 2) * (1.0 - s)


def _scalar(out, x):
    return float(out) if np.ndim(x) == 0 else out


def kato_eval(kw: KatoWeight, x, j: int = 0):
    """
    ∂_x^j φ_δ(x).

    Raises:
        ValidationError: If j is outside 0..5
    """
    if j not in range(MAX_ORDER + 1):
        raise ValidationError("derivative order must be 0..5", {'j': j})
    return _scalar(kw.derivative(x, j), x)


def kato_ratio(kw: KatoWeight, x):
    """(∂_x³φ_δ)²/∂_xφ_δ, never negative."""
    return _scalar(kw.ratio(x), x)
