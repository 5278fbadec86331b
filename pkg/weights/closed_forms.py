"""
Closed-form x-derivatives of e^{a x^{5/4}} divided by the function itself.

    ∂_x^j e^{a x^{5/4}} = (5/4^j) sum_m c_m a^{p_m} x^{q_m} · e^{a x^{5/4}}

The same table gives the Taylor coefficients of the bridge polynomial at
x = N (divide by j!) and, through `d_da`, their a-derivatives.
"""

from typing import Sequence, Tuple

import numpy as np

Monomial = Tuple[float, int, float]


class MonomialSum:
    """scale · sum_m coef_m a^{p_m} x^{q_m}"""

    __slots__ = ('scale', 'terms')

    def __init__(self, scale: float, terms: Sequence[Monomial]):
        self.scale = scale
        self.terms = tuple(terms)

    def __call__(self, a, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(np.broadcast(np.asarray(a, dtype=float), x).shape)
        for coef, p, q in self.terms:
            total = total + coef * np.power(a, p) * np.power(x, q)
        return self.scale * total

    def d_da(self, a, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(np.broadcast(np.asarray(a, dtype=float), x).shape)
        for coef, p, q in self.terms:
            if p:
                total = total + coef * p * np.power(a, p - 1) * np.power(x, q)
        return self.scale * total


CORE_RATIOS = (
    MonomialSum(1.0, [(1.0, 0, 0.0)]),
    MonomialSum(5 / 4, [(1.0, 1, 0.25)]),
    MonomialSum(5 / 4 ** 2, [(5.0, 2, 0.5), (1.0, 1, -0.75)]),
    MonomialSum(5 / 4 ** 3, [(25.0, 3, 0.75), (15.0, 2, -0.5), (-3.0, 1, -1.75)]),
    MonomialSum(5 / 4 ** 4, [(125.0, 4, 1.0), (150.0, 3, -0.25), (-45.0, 2, -1.5), (21.0, 1, -2.75)]),
    MonomialSum(5 / 4 ** 5, [
        (625.0, 5, 1.25), (1250.0, 4, 0.0), (-375.0, 3, -1.25),
        (375.0, 2, -2.5), (-231.0, 1, -3.75),
    ]),
)

# (∂³φ)²/∂φ over φ on the core, expanded
CUBE_SQUARED_OVER_SLOPE = MonomialSum(5 / 4 ** 5, [
    (625.0, 5, 1.25), (750.0, 4, 0.0), (75.0, 3, -1.25),
    (-90.0, 2, -2.5), (9.0, 1, -3.75),
])


def master_coefficients(epsilon: float) -> Tuple[float, float, float, float]:
    """
    (c4, c3, c2, c1) of L/φ_N on [1, N] once the x^{5/4} term cancels:

        L/φ_N = c4 a^4 + c3 a^3 x^{-5/4} + c2 a^2 x^{-10/4} + c1 a x^{-15/4}
    """
    gamma = 25.0 / (4.0 * (5.0 - epsilon))
    scale = 5 / 4 ** 5
    return (
        scale * (1.5 * 1250 + gamma * 750),
        scale * (1.5 * -375 + gamma * 75),
        scale * (1.5 * 375 + gamma * -90),
        scale * (1.5 * -231 + gamma * 9),
    )
