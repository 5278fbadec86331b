"""
Weight parameters and the decay law a(t).

    a(t) = a0 / (1 + kappa a0^m t)^{1/m},   a' = -(kappa/m) a^{m+1}

with m = 4 for the fifth-order flow (kappa = 4 k(epsilon)) and m = 2 for the
third-order comparison law.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from core.services.base import ValidationError

FIVE_OVER_FOUR_TO_FIFTH = Fraction(5 ** 5, 4 ** 5)

Real = Union[float, np.ndarray]


def _check_epsilon(epsilon) -> None:
    if not (0 <= epsilon < 1):
        raise ValidationError(
            "epsilon must lie in [0, 1)", {'epsilon': f"got {epsilon!r}"}
        )


def split_coefficient(epsilon: float) -> float:
    """25 / (4 (5 - epsilon)), the weight of (∂³φ)²/∂φ in the master bound."""
    _check_epsilon(epsilon)
    return 25.0 / (4.0 * (5.0 - epsilon))


def k_of_epsilon_exact(epsilon: Fraction) -> Fraction:
    """Rational k(epsilon) = (5^5/4^5)(3/2 + 25/(4(5 - epsilon)))."""
    epsilon = Fraction(epsilon)
    _check_epsilon(epsilon)
    return FIVE_OVER_FOUR_TO_FIFTH * (Fraction(3, 2) + Fraction(25, 4) / (5 - epsilon))


def k_of_epsilon(epsilon: float) -> float:
    """
    Coefficient of a^5 x^{5/4} in the master quantity on [1, N].

    Args:
        epsilon: Energy-split parameter in [0, 1)

    Returns:
        k(epsilon); strictly increasing, k(0) = 34375/4096

    Raises:
        ValidationError: If epsilon is outside [0, 1)
    """
    _check_epsilon(epsilon)
    return float(FIVE_OVER_FOUR_TO_FIFTH) * (1.5 + split_coefficient(epsilon))


@dataclass(frozen=True)
class WeightParams:
    """a0 > 0, 0 <= epsilon < 1, integer N >= 1."""
    a0: float
    epsilon: float = 0.0
    N: int = 10

    def __post_init__(self):
        errors = {}
        if not (self.a0 > 0 and math.isfinite(self.a0)):
            errors['a0'] = "must be a finite positive number"
        if not (0 <= self.epsilon < 1):
            errors['epsilon'] = "must lie in [0, 1)"
        if int(self.N) != self.N or self.N < 1:
            errors['N'] = "must be an integer >= 1"
        if errors:
            raise ValidationError("Invalid weight parameters", errors)
        object.__setattr__(self, 'N', int(self.N))

    @property
    def law(self) -> 'DecayLaw':
        return DecayLaw.from_epsilon(self.a0, self.epsilon)

    def exponent_at_matching_point(self) -> float:
        """a0 N^{5/4}, the log of the largest core value."""
        return self.a0 * self.N ** 1.25


@dataclass(frozen=True)
class DecayLaw:
    """
    Shrinking decay rate a(t).

    `kappa` multiplies a0^order t inside the root; order 4 is the fifth-order
    law, order 2 the third-order (KdV) one.
    """
    a0: float
    kappa: float
    order: int = 4

    def __post_init__(self):
        errors = {}
        if not self.a0 > 0:
            errors['a0'] = "must be positive"
        if not self.kappa > 0:
            errors['kappa'] = "must be positive"
        if self.order not in (2, 4):
            errors['order'] = "must be 2 or 4"
        if errors:
            raise ValidationError("Invalid decay law", errors)

    @classmethod
    def from_epsilon(cls, a0: float, epsilon: float = 0.0) -> 'DecayLaw':
        return cls(a0=a0, kappa=4.0 * k_of_epsilon(epsilon))

    @classmethod
    def kdv(cls, a0: float) -> 'DecayLaw':
        return cls(a0=a0, kappa=27.0 / 4.0, order=2)

    @property
    def k(self) -> float:
        """Coefficient in a' = -k a^{order+1}."""
        return self.kappa / self.order

    def a(self, t: Real) -> Real:
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0) or not np.all(np.isfinite(t_arr)):
            raise ValidationError("time must be finite and nonnegative", {'t': f"got {t!r}"})
        value = self.a0 / (1.0 + self.kappa * self.a0 ** self.order * t_arr) ** (1.0 / self.order)
        return float(value) if np.ndim(value) == 0 else value

    def a_prime(self, t: Real) -> Real:
        return -self.k * np.power(self.a(t), self.order + 1)


def decay_a(law: DecayLaw, t: Real) -> Real:
    """a(t) for the given law; rejects negative t."""
    return law.a(t)


def n0_threshold(a0: float, c: float) -> int:
    """Least integer strictly greater than c^{4/5} a0^{-4/5}."""
    if not (a0 > 0 and c > 0):
        raise ValidationError("a0 and c must be positive", {'a0': a0, 'c': c})
    return int(math.floor(c ** 0.8 * a0 ** -0.8)) + 1
