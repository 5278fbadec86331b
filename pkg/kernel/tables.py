"""
Kernel tables: K sampled on a uniform x grid with per-sample method and
error estimate.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from core.app_settings import lab_settings
from core.services.base import ValidationError
from .enums import KernelMethod
from .quadrature import kernel_contour, kernel_direct, phase_order

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('x', 'K', 'method', 'abs_err_est')


@dataclass
class KernelTable:
    """Samples of K_j on a grid."""
    j: int
    x: np.ndarray
    K: np.ndarray
    method: List[str] = field(default_factory=list)
    abs_err: np.ndarray = None

    def __post_init__(self):
        if self.abs_err is None:
            self.abs_err = np.zeros_like(self.K)

    @property
    def order(self) -> int:
        return phase_order(self.j)

    def window(self, lo: float, hi: float) -> 'KernelTable':
        mask = (self.x >= lo) & (self.x <= hi)
        return KernelTable(
            j=self.j, x=self.x[mask], K=self.K[mask],
            method=[m for m, keep in zip(self.method, mask) if keep],
            abs_err=self.abs_err[mask],
        )

    def at_time(self, t: float) -> 'KernelTable':
        """Same samples for the flow at time t: x -> x t^{1/n}, K -> K t^{-1/n}."""
        if not t > 0:
            raise ValidationError("time must be positive", {'t': t})
        s = t ** (1.0 / self.order)
        return KernelTable(j=self.j, x=self.x * s, K=self.K / s,
                           method=list(self.method), abs_err=self.abs_err / s)

    def csv_rows(self, float_format: str = '.17g') -> List[Dict[str, str]]:
        return [
            {
                'x': format(float(x), float_format),
                'K': format(float(k), float_format),
                'method': m,
                'abs_err_est': format(float(e), float_format),
            }
            for x, k, m, e in zip(self.x, self.K, self.method, self.abs_err)
        ]


def build_kernel_table(j: int = 2, xmin: float = -40.0, xmax: float = 10.0,
                       step: float = None, method=KernelMethod.DIRECT) -> KernelTable:
    """
    Sample K_j on [xmin, xmax].

    Args:
        j: Hierarchy index
        xmin, xmax: Range, xmin < xmax
        step: Grid step (default `LAB['KERNEL']['TABLE_STEP']`)
        method: DIRECT everywhere, CONTOUR (x >= 0 only) or AUTO

    Returns:
        KernelTable
    """
    method = KernelMethod(method)
    phase_order(j)
    step = step or lab_settings.get('KERNEL', 'TABLE_STEP', 0.02)
    if not xmin < xmax:
        raise ValidationError("xmin must be below xmax", {'xmin': xmin, 'xmax': xmax})
    if method == KernelMethod.CONTOUR and xmin < 0:
        raise ValidationError("contour tables need xmin >= 0", {'xmin': xmin})

    count = int(np.floor((xmax - xmin) / step + 1e-9))
    x = xmin + step * np.arange(count + 1)
    values = np.empty_like(x)
    errors = np.empty_like(x)
    tags = []
    for i, xi in enumerate(x):
        use_contour = method == KernelMethod.CONTOUR or (method == KernelMethod.AUTO and xi >= 0)
        if use_contour:
            values[i], errors[i] = kernel_contour(xi, j)
            tags.append(KernelMethod.CONTOUR.value)
        else:
            values[i], errors[i] = kernel_direct(xi, j)
            tags.append(KernelMethod.DIRECT.value)
    logger.info("kernel table j=%d on [%s, %s]: %d samples, max error %.2e",
                j, xmin, xmax, x.size, float(errors.max()))
    return KernelTable(j=j, x=x, K=values, method=tags, abs_err=errors)
