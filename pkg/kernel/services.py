"""
Kernel Service Module

Tabulates K_j, fits its decay envelope and cross-checks the direct
quadrature against the rotated contour.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from core.app_settings import lab_settings
from core.services.base import BaseService, ServiceError, ServiceResult, ValidationError
from core.signals import report_ready
from .enums import KernelMethod
from .envelope import EnvelopeFit, fit_decay_envelope
from .quadrature import kernel_at_zero, kernel_contour, kernel_direct
from .tables import KernelTable, build_kernel_table

logger = logging.getLogger(__name__)

# contour and direct quadrature must agree on [0, CROSS_CHECK_XMAX]
CROSS_CHECK_XMAX = 6.0
CROSS_CHECK_TOLERANCE = 1e-8


@dataclass
class KernelRun:
    table: KernelTable
    fit: EnvelopeFit
    checks: Dict[str, Any]

    @property
    def passed(self) -> bool:
        return self.fit.passed and all(self.checks.get(k, True) for k in ('zero_ok', 'contour_ok'))

    def summary(self) -> Dict[str, Any]:
        return {**self.fit.summary(), **self.checks, 'passed': self.passed}


def contour_agreement(j: int = 2, xmax: float = CROSS_CHECK_XMAX, points: int = 61) -> float:
    """Largest |direct - contour| on [0, xmax]."""
    gap = 0.0
    for x in np.linspace(0.0, xmax, points):
        gap = max(gap, abs(kernel_direct(x, j)[0] - kernel_contour(x, j)[0]))
    return gap


class KernelService(BaseService):
    """
    Service for the `kernel` subcommand.

    Context keys:
        cross_check: Run the K(0) and contour checks (default True)
    """

    def validate(self, data: Dict[str, Any]) -> Dict[str, Any]:
        j = int(data.get('j', 2))
        xmin = float(data.get('xmin', -40.0))
        xmax = float(data.get('xmax', 10.0))
        step = float(data.get('step') or lab_settings.get('KERNEL', 'TABLE_STEP', 0.02))
        errors = {}
        if j not in (1, 2):
            errors['j'] = "must be 1 or 2"
        if not xmin < xmax:
            errors['xmax'] = "must exceed xmin"
        if not step > 0:
            errors['step'] = "must be positive"
        if errors:
            raise ValidationError("invalid kernel request", errors)
        method = KernelMethod(data.get('method') or KernelMethod.DIRECT.value)
        return {'j': j, 'xmin': xmin, 'xmax': xmax, 'step': step, 'method': method}

    def tabulate(self, **params) -> ServiceResult:
        """
        Build the table, fit the envelope and run the cross-checks.

        Returns:
            ServiceResult with a KernelRun; exit code 2 when the fitted
            exponents miss their targets or a cross-check fails.
        """
        try:
            params = self.validate(params)
            table = build_kernel_table(**params)
            fit = fit_decay_envelope(table)
            checks = self.cross_check(params['j']) if self.context.get('cross_check', True) else {}
        except ServiceError as e:
            logger.error("kernel run aborted: %s", e.message)
            return ServiceResult.from_error(e)

        run = KernelRun(table=table, fit=fit, checks=checks)
        report_ready.send(sender=self.__class__, name='kernel', report=run)
        if not run.passed:
            return ServiceResult.fail("kernel checks failed", run.summary(), exit_code=2, data=run)
        return ServiceResult.ok(run, f"p={fit.right_exponent:.4f} q={fit.left_exponent:.4f}")

    def cross_check(self, j: int) -> Dict[str, Any]:
        exact = kernel_at_zero(j)
        zero_gap = abs(kernel_direct(0.0, j)[0] - exact)
        contour_gap = contour_agreement(j)
        logger.info("kernel j=%d: |K(0) - exact| = %.2e, contour gap %.2e", j, zero_gap, contour_gap)
        return {
            'K0_exact': exact,
            'K0_error': zero_gap,
            'zero_ok': zero_gap <= 1e-6,
            'contour_gap': contour_gap,
            'contour_ok': contour_gap <= CROSS_CHECK_TOLERANCE,
        }
