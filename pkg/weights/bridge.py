"""
Bridge polynomial P_N: the quartic Taylor polynomial of e^{a x^{5/4}} at
x = N that continues the weight for x >= N.

Every quantity here is scaled by e^{-a N^{5/4}} and written in y = x - N, so
nothing overflows; multiply by `scale` to get the paper-sized values.
"""

from dataclasses import dataclass
from functools import cached_property
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial

from core.services.base import ValidationError
from .closed_forms import CORE_RATIOS


@dataclass(frozen=True)
class BridgePolynomial:
    """P_N(x, t) = e^{a N^{5/4}} · p(x - N) with a = a(t)."""
    N: int
    a: float

    def __post_init__(self):
        if self.N < 1 or self.a <= 0:
            raise ValidationError(
                "Bridge polynomial needs N >= 1 and a > 0",
                {'N': self.N, 'a': self.a},
            )

    @cached_property
    def scaled_coefficients(self) -> np.ndarray:
        """c0..c4 divided by e^{a N^{5/4}} (so c0 = 1)."""
        return np.array([
            float(CORE_RATIOS[n](self.a, self.N)) / factorial(n) for n in range(5)
        ])

    @cached_property
    def scaled_a_derivative(self) -> np.ndarray:
        return np.array([
            float(CORE_RATIOS[n].d_da(self.a, self.N)) / factorial(n) for n in range(5)
        ])

    @property
    def log_scale(self) -> float:
        return self.a * self.N ** 1.25

    @property
    def scale(self) -> float:
        return float(np.exp(self.log_scale))

    @property
    def coefficients(self) -> np.ndarray:
        """Taylor coefficients c0..c4 at x = N (may overflow to inf)."""
        with np.errstate(over='ignore'):
            return self.scaled_coefficients * self.scale

    @cached_property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.scaled_coefficients)

    def value(self, y, j: int = 0):
        """j-th x-derivative of the scaled polynomial at y = x - N."""
        return self.polynomial.deriv(j)(y) if j else self.polynomial(y)

    def S(self, y):
        """S_N: a-derivative of the scaled polynomial, ∂_t P_N = a'(S_N + N^{5/4} p) e^{aN^{5/4}}."""
        return Polynomial(self.scaled_a_derivative)(y)

    # -- the part of p that carries the sign-indefinite terms -------------

    def _remainder_coefficients(self, a: float) -> np.ndarray:
        N = self.N
        return np.array([
            0.0,
            0.0,
            (5 / 4 ** 2) * 0.5 * a * N ** -0.75,
            -(5 / 4 ** 3) * (3 / 6) * a * N ** -1.75,
            (5 / 4 ** 4) / 24 * (150 * a ** 3 * N ** -0.25 - 45 * a ** 2 * N ** -1.5 + 21 * a * N ** -2.75),
        ])

    def _remainder_a_coefficients(self) -> np.ndarray:
        N, a = self.N, self.a
        return np.array([
            0.0,
            0.0,
            (5 / 4 ** 2) * 0.5 * N ** -0.75,
            -(5 / 4 ** 3) * (3 / 6) * N ** -1.75,
            (5 / 4 ** 4) / 24 * (450 * a ** 2 * N ** -0.25 - 90 * a * N ** -1.5 + 21 * N ** -2.75),
        ])

    def R(self, y):
        return Polynomial(self._remainder_coefficients(self.a))(y)

    def R_x(self, y):
        return Polynomial(self._remainder_coefficients(self.a)).deriv()(y)

    def R_a(self, y):
        """∂_t R_N / a'(t)."""
        return Polynomial(self._remainder_a_coefficients())(y)

    # -- lower-bound brackets ---------------------------------------------

    def bracket_R(self, y):
        N, a = self.N, self.a
        y = np.asarray(y, dtype=float)
        quartic = a ** 3 * N ** -0.25 + a ** 2 * N ** -1.5 + a * N ** -2.75
        return quartic * y ** 4 + a * N ** -1.75 * y ** 3 + a * N ** -0.75 * y ** 2

    def bracket_R_x(self, y):
        N, a = self.N, self.a
        y = np.asarray(y, dtype=float)
        cubic = a ** 3 * N ** -0.25 + a ** 2 * N ** -1.5 + a * N ** -2.75
        return cubic * y ** 3 + a * N ** -1.75 * y ** 2 + a * N ** -0.75 * y

    def bracket_R_a(self, y):
        N, a = self.N, self.a
        y = np.asarray(y, dtype=float)
        quartic = a ** 2 * N ** -0.25 + a * N ** -1.5 + N ** -2.75
        return quartic * y ** 4 + N ** -1.75 * y ** 3 + N ** -0.75 * y ** 2

    def bracket_P(self, y):
        N, a = self.N, self.a
        y = np.asarray(y, dtype=float)
        return (
            1.0
            + a * N ** 0.25 * y
            + (a ** 2 * N ** 0.5 + a * N ** -0.75) * y ** 2 / 2
            + (a ** 3 * N ** 0.75 + a ** 2 * N ** -0.5 + a * N ** -1.75) * y ** 3 / 6
            + (a ** 4 * N + a ** 3 * N ** -0.25 + a ** 2 * N ** -1.5 + a * N ** -2.75) * y ** 4 / 24
        )

    def lower_P_x(self, y):
        """Explicit lower bound for ∂_x p (no fitted constant)."""
        N, a = self.N, self.a
        y = np.asarray(y, dtype=float)
        return (
            (5 / 4) * a * N ** 0.25
            + (25 / 16) * a ** 2 * N ** 0.5 * y
            + (125 / 64) * a ** 3 * N ** 0.75 * y ** 2 / 2
            + (625 / 256) * a ** 4 * N * y ** 3 / 6
        )

    def bracket_S(self, y):
        N, a = self.N, self.a
        y = np.asarray(y, dtype=float)
        return (
            N ** 0.25 * y
            + (a * N ** 0.5 + N ** -0.75) * y ** 2 / 2
            + (a ** 2 * N ** 0.75 + a * N ** -0.5 + a * N ** -1.75) * y ** 3 / 6
            + (a ** 3 * N + a ** 2 * N ** -0.25 + a * N ** -1.5 + a * N ** -2.75) * y ** 4 / 24
        )

    # -- Young steps (slack = right side minus left side) ----------------

    def young_quartic_slack(self, a=None):
        """5(149 a^3 N^{-1/4} + 4 a N^{-11/4}) - 5·46 a^2 N^{-6/4}."""
        a = self.a if a is None else np.asarray(a, dtype=float)
        N = self.N
        return 5 * (149 * a ** 3 * N ** -0.25 + 4 * a * N ** -2.75) - 5 * 46 * a ** 2 * N ** -1.5

    def young_cubic_slack(self, y, a=None):
        """(1/8) a N^{-3/4} y^2 + 80/(4^4·24) a N^{-11/4} y^4 - (1/24) a N^{-7/4} y^3."""
        a = self.a if a is None else a
        N = self.N
        y = np.asarray(y, dtype=float)
        return (
            a * N ** -0.75 * y ** 2 / 8
            + 80 / (4 ** 4 * 24) * a * N ** -2.75 * y ** 4
            - a * N ** -1.75 * y ** 3 / 24
        )
