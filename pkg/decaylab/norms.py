"""
Weighted L² norms ∫ w(x) u(x)² dx over a window.

A weight is given by its logarithm, a callable x -> log w(x), so that
w·u² can be summed in log space when w alone would overflow.
"""

import logging
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from core.services.base import ValidationError
from solver.grid import Field
from weights.kato import KatoWeight
from weights.params import DecayLaw
from weights.piecewise import PiecewiseWeight
from .quadrature import spectral_interpolate, window_rule

logger = logging.getLogger(__name__)

LogWeight = Callable[[np.ndarray], np.ndarray]

# below this log-magnitude the direct sum is safe
DIRECT_LIMIT = 700.0


def unit_weight(x: np.ndarray) -> np.ndarray:
    return np.zeros_like(x)


def exponential_weight(a: float) -> LogWeight:
    """log of e^{a x_+^{5/4}}."""
    def log_w(x):
        return a * np.clip(x, 0.0, None) ** 1.25
    return log_w


def moving_weight(law: DecayLaw, t: float) -> LogWeight:
    return exponential_weight(law.a(t))


def kato_exponential(beta: float) -> LogWeight:
    """log of e^{2βx}."""
    def log_w(x):
        return 2.0 * beta * x
    return log_w


def kato_saturated(kw: KatoWeight) -> LogWeight:
    return kw.log_value


def piecewise_weight(w: PiecewiseWeight, t: float) -> LogWeight:
    def log_w(x):
        return w.profile(x, t).log_value
    return log_w


def weight_breakpoints(w: Optional[PiecewiseWeight] = None) -> Tuple[float, ...]:
    if w is None:
        return (0.0,)
    return (0.0, w.eta_start, w.eta_end, 1.0, float(w.N))


def log_weighted_norm(f: Field, weight: Optional[LogWeight] = None,
                      window: Optional[Tuple[float, float]] = None,
                      breakpoints: Iterable[float] = (0.0,),
                      panel: Optional[float] = None) -> float:
    """log ∫_window w u² dx; -inf for u ≡ 0 on the window."""
    weight = weight or unit_weight
    window = window or f.grid.window()
    panel = panel or 4.0 * f.grid.dx
    x, q = window_rule(window, breakpoints, panel)
    u = spectral_interpolate(f, x)
    log_w = np.asarray(weight(x), dtype=float)
    if not np.all(np.isfinite(log_w)):
        raise ValidationError("weight is not finite on the window", {'window': window})
    nonzero = u != 0
    if not np.any(nonzero):
        return -np.inf
    terms = log_w[nonzero] + 2.0 * np.log(np.abs(u[nonzero]))
    return float(logsumexp(terms, b=q[nonzero]))


def weighted_norm(f: Field, weight: Optional[LogWeight] = None,
                  window: Optional[Tuple[float, float]] = None,
                  breakpoints: Iterable[float] = (0.0,),
                  panel: Optional[float] = None) -> float:
    """
    ∫_window w(x) u(x)² dx.

    Args:
        f: Field
        weight: Log-weight (default w ≡ 1)
        window: Integration window (default the trusted half of the box)
        breakpoints: Where the weight loses smoothness
        panel: Largest quadrature panel (default 4 dx)

    Returns:
        The integral; inf (with a warning) when it exceeds the float range
    """
    weight = weight or unit_weight
    window = window or f.grid.window()
    panel = panel or 4.0 * f.grid.dx
    x, q = window_rule(window, breakpoints, panel)
    log_w = np.asarray(weight(x), dtype=float)
    if np.max(log_w) < DIRECT_LIMIT:
        u = spectral_interpolate(f, x)
        return float(np.sum(q * np.exp(log_w) * u ** 2))
    logger.warning("weight reaches e^%.0f on %s, summing in log space", np.max(log_w), window)
    log_value = log_weighted_norm(f, weight, window, breakpoints, panel)
    with np.errstate(over='ignore'):
        return float(np.exp(log_value))
