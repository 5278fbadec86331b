"""
Decay envelope fits of a kernel table.

Right side: log E(x) + ((n-2)/(2(n-1))) log x = A - c x^p on the right fit
window, with E the single-saddle envelope; p should be n/(n-1).
Left side: the local maxima of |K| on the left window decay like |x|^{-q};
q should be (n-2)/(2(n-1)).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy.optimize import curve_fit
from scipy.signal import find_peaks

from core.app_settings import lab_settings
from .quadrature import kernel_envelope, phase_order, predicted_right_rate
from .tables import KernelTable

logger = logging.getLogger(__name__)

MIN_PEAKS = 3


@dataclass
class EnvelopeFit:
    j: int
    right_exponent: float = math.nan
    right_rate: float = math.nan
    right_amplitude: float = math.nan
    left_exponent: float = math.nan
    predicted_rate: float = math.nan
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def target_right_exponent(self) -> float:
        n = phase_order(self.j)
        return n / (n - 1)

    @property
    def target_left_exponent(self) -> float:
        n = phase_order(self.j)
        return (n - 2) / (2 * (n - 1))

    @property
    def passed(self) -> bool:
        tol = lab_settings.get('KERNEL', 'EXPONENT_TOLERANCE', 0.1)
        return (
            abs(self.right_exponent - self.target_right_exponent) <= tol
            and abs(self.left_exponent - self.target_left_exponent) <= tol
        )

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.right_exponent, self.right_rate, self.left_exponent

    def summary(self) -> Dict[str, object]:
        return {
            'j': self.j,
            'right_exponent': self.right_exponent,
            'right_rate': self.right_rate,
            'predicted_rate': self.predicted_rate,
            'left_exponent': self.left_exponent,
            'passed': self.passed,
            **{f'diag_{k}': v for k, v in self.diagnostics.items()},
        }


def _right_model(x, A, c, p):
    return A - c * x ** p


def _fit_right(table: KernelTable, fit: EnvelopeFit, window) -> None:
    """
    Fit the right tail on the table's x samples.

    K_1 does not oscillate, so log|K| comes straight from the table. For
    j >= 2, K = Re W/π crosses zero on x > 0 and the default window holds
    fewer than two oscillations, too few peaks to fit, so the fit runs on the
    single-saddle envelope |W|/π at the table's points instead.
    `right_table_ratio` = max |K|/envelope over the window ties that
    envelope to the tabulated values: at most 1, and close to 1 once the
    window spans a crest.
    """
    n = table.order
    part = table.window(*window)
    if part.x.size < 4:
        fit.diagnostics['right'] = f"only {part.x.size} samples in {window}"
        return
    if table.j == 1:
        envelope = np.abs(part.K)
    else:
        envelope = np.array([kernel_envelope(x, table.j) for x in part.x])
    if np.any(envelope <= 0):
        fit.diagnostics['right'] = "envelope vanished"
        return
    fit.diagnostics['right_table_ratio'] = float(np.max(np.abs(part.K) / envelope))
    y = np.log(envelope) + (n - 2) / (2 * (n - 1)) * np.log(part.x)
    p0 = (y[0], fit.predicted_rate, n / (n - 1))
    try:
        params, cov = curve_fit(_right_model, part.x, y, p0=p0, maxfev=20000)
    except (RuntimeError, ValueError) as e:
        fit.diagnostics['right'] = f"fit failed: {e}"
        logger.warning("right envelope fit failed for j=%d: %s", table.j, e)
        return
    fit.right_amplitude, fit.right_rate, fit.right_exponent = map(float, params)
    residual = y - _right_model(part.x, *params)
    fit.diagnostics['right_rms'] = float(np.sqrt(np.mean(residual ** 2)))
    fit.diagnostics['right_points'] = int(part.x.size)
    if not np.all(np.isfinite(cov)):
        fit.diagnostics['right'] = "ill-conditioned: covariance not finite"
    else:
        fit.diagnostics['right_condition'] = float(np.linalg.cond(cov))
        fit.diagnostics['right_exponent_stderr'] = float(math.sqrt(cov[2, 2]))


def _fit_left(table: KernelTable, fit: EnvelopeFit, window) -> None:
    part = table.window(*window)
    magnitude = np.abs(part.K)
    peaks, _ = find_peaks(magnitude)
    fit.diagnostics['left_peaks'] = int(peaks.size)
    if peaks.size < MIN_PEAKS:
        fit.diagnostics['left'] = f"only {peaks.size} peaks in {window}"
        return
    lx = np.log(np.abs(part.x[peaks]))
    ly = np.log(magnitude[peaks])
    slope, intercept = np.polyfit(lx, ly, 1)
    fit.left_exponent = float(-slope)
    fit.diagnostics['left_rms'] = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))


def fit_decay_envelope(table: KernelTable, right_window=None, left_window=None) -> EnvelopeFit:
    """
    Fit the right-side exponent and rate and the left-side algebraic exponent.

    Fits that cannot be carried out leave NaN in the corresponding field and
    say why in `diagnostics`; they never raise.
    """
    conf = lab_settings.KERNEL
    right_window = tuple(right_window or conf['RIGHT_FIT_WINDOW'])
    left_window = tuple(left_window or conf['LEFT_FIT_WINDOW'])
    fit = EnvelopeFit(j=table.j, predicted_rate=predicted_right_rate(table.j))
    _fit_right(table, fit, right_window)
    _fit_left(table, fit, left_window)
    logger.info("envelope j=%d: p=%.4f c=%.4f (predicted %.4f) q=%.4f",
                table.j, fit.right_exponent, fit.right_rate, fit.predicted_rate, fit.left_exponent)
    return fit
