"""
Composite Gauss-Legendre rules on a window, split at the breakpoints of the
weight and graded geometrically towards 0, where x_+^{5/4} is not smooth.
Fields are carried onto the nodes by their trigonometric interpolant.
"""

from functools import lru_cache
from typing import Iterable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from core.app_settings import lab_settings
from core.services.base import ValidationError
from solver.grid import Field

# nodes per block in the interpolation sums
CHUNK = 512


@lru_cache(maxsize=8)
def _gauss(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return leggauss(nodes)


def _edges(lo: float, hi: float, breakpoints: Iterable[float], panel: float,
           grade_at: Iterable[float], levels: int,
           fine: Iterable[Tuple[float, float, float]] = ()) -> np.ndarray:
    fine = [(a, b, p) for a, b, p in fine if p > 0 and a < b]
    cuts = {lo, hi}
    cuts.update(b for b in breakpoints if lo < b < hi)
    cuts.update(c for a, b, _ in fine for c in (a, b) if lo < c < hi)
    for g in grade_at:
        if lo <= g <= hi:
            cuts.add(g)
            for level in range(1, levels + 1):
                h = panel * 0.5 ** level
                cuts.update(c for c in (g - h, g + h) if lo < c < hi)
    cuts = np.array(sorted(cuts))
    edges = [cuts[0]]
    for a, b in zip(cuts[:-1], cuts[1:]):
        width = min([panel] + [p for s, e, p in fine if s <= a and b <= e])
        count = max(1, int(np.ceil((b - a) / width - 1e-12)))
        edges.extend(np.linspace(a, b, count + 1)[1:])
    return np.array(edges)


def window_rule(window: Tuple[float, float], breakpoints: Iterable[float] = (),
                panel: float = 1.0, nodes: Optional[int] = None,
                grading: Optional[int] = None,
                grade_at: Iterable[float] = (0.0,),
                fine: Iterable[Tuple[float, float, float]] = ()) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights of a composite Gauss-Legendre rule.

    Args:
        window: (lo, hi)
        breakpoints: Points where the integrand may lose smoothness
        panel: Largest panel width
        nodes: Points per panel (default `LAB['DECAYLAB']['GAUSS_NODES']`)
        grading: Halvings towards each `grade_at` point
        fine: (a, b, width) spans integrated with panels no wider than width

    Returns:
        (x, w) arrays
    """
    lo, hi = map(float, window)
    if not lo < hi:
        raise ValidationError("empty quadrature window", {'window': window})
    if not panel > 0:
        raise ValidationError("panel width must be positive", {'panel': panel})
    conf = lab_settings.DECAYLAB
    nodes = nodes or conf['GAUSS_NODES']
    grading = conf['GRADING_LEVELS'] if grading is None else grading
    edges = _edges(lo, hi, breakpoints, panel, grade_at, grading, fine)
    t, w = _gauss(nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return x, weights


def spectral_interpolate(field: Field, points: np.ndarray, order: int = 0) -> np.ndarray:
    """
    ∂_x^order of the trigonometric interpolant of `field` at arbitrary points.

    Modes below `SPECTRAL_CUTOFF` times the largest are skipped.
    """
    grid = field.grid
    spectrum = field.spectrum / grid.M
    coeff = (1j * grid.derivative_k) ** order * spectrum
    # conjugate pairs count twice, the mean and Nyquist once
    coeff[1:-1] *= 2.0
    # the Nyquist mode is cos(kx)·Re(c), as irfft reads it, and has no derivative
    coeff[-1] = coeff[-1].real if order == 0 else 0.0
    cutoff = lab_settings.get('DECAYLAB', 'SPECTRAL_CUTOFF', 1e-15)
    live = np.abs(spectrum) > cutoff * max(np.abs(spectrum).max(), np.finfo(float).tiny)
    live[0] = True
    k = grid.k[live]
    coeff = coeff[live]
    points = np.asarray(points, dtype=float)
    shifted = points.ravel() + grid.L
    out = np.empty(shifted.shape)
    for start in range(0, shifted.size, CHUNK):
        block = shifted[start:start + CHUNK]
        out[start:start + CHUNK] = (np.exp(1j * np.outer(block, k)) @ coeff).real
    return out.reshape(points.shape)


def field_derivatives_at(field: Field, points: np.ndarray, order: int) -> np.ndarray:
    """Rows ∂_x^j u at the points, j = 0..order."""
    return np.stack([spectral_interpolate(field, points, j) for j in range(order + 1)])
