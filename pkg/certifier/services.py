"""
Certifier Service Module

Runs a full certification sweep: every (a0, ε) family of weights plus the
Kato grid, optionally fanned out over a process pool, and reduces the pieces
into one CertReport.
"""

import logging
from multiprocessing import Pool
from typing import Any, Dict, Optional, Tuple

from core.app_settings import lab_settings
from core.services.base import BaseService, ServiceError, ServiceResult
from core.signals import report_ready
from .checks import certify_family, certify_kato
from .reports import CertReport
from .sweeps import SweepSpec

logger = logging.getLogger(__name__)


def _family_task(args: Tuple[float, float, SweepSpec]) -> CertReport:
    a0, epsilon, spec = args
    return certify_family(a0, epsilon, spec)


def _kato_task(spec: SweepSpec) -> CertReport:
    return certify_kato(spec)


class CertifierService(BaseService):
    """
    Service running certification sweeps.

    Context keys:
        workers: Number of processes (1 runs in-process)
        kato: Include the Kato grid (default True)
    """

    def validate(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """Build the SweepSpec from settings plus overrides in `data`."""
        spec = data.get('spec')
        if spec is None:
            spec = SweepSpec.from_settings(**data.get('overrides', {}))
        return {'spec': spec}

    def certify(self, spec: Optional[SweepSpec] = None, **overrides) -> ServiceResult:
        """
        Certify every weight and Kato inequality on the sweep.

        Returns:
            ServiceResult with the CertReport as data. Fails with exit code 2
            when a row fails and 3 when a row is a numerical defect; the
            first failing row is the witness in `errors`.
        """
        try:
            spec = self.validate({'spec': spec, 'overrides': overrides})['spec']
            report = self.run_sweep(spec)
        except ServiceError as e:
            logger.error("certification aborted: %s", e.message)
            return ServiceResult.from_error(e)

        report_ready.send(sender=self.__class__, name='weights-check', report=report)
        if report.has_defect:
            return ServiceResult.fail("Numerical defect during certification",
                                      report.witness(), exit_code=3, data=report)
        if not report.passed:
            return ServiceResult.fail(f"{len(report.failures())} inequality rows failed",
                                      report.witness(), exit_code=2, data=report)
        return ServiceResult.ok(report, f"{len(report.rows)} rows passed")

    def run_sweep(self, spec: SweepSpec) -> CertReport:
        workers = int(self.context.get('workers') or lab_settings.get('CERTIFIER', 'WORKERS', 1))
        families = sorted({(p.a0, p.epsilon) for p in spec.weight_points()})
        tasks = [(a0, epsilon, spec) for a0, epsilon in families]
        include_kato = self.context.get('kato', True) and spec.beta_values and spec.delta_values

        logger.info("certifying %d weight families on %d worker(s)", len(tasks), workers)
        if workers > 1 and len(tasks) > 1:
            with Pool(processes=workers) as pool:
                parts = pool.map(_family_task, tasks)
                if include_kato:
                    parts.append(pool.apply(_kato_task, (spec,)))
        else:
            parts = [_family_task(task) for task in tasks]
            if include_kato:
                parts.append(_kato_task(spec))

        report = CertReport(sweep=spec.as_dict())
        for part in parts:
            report = report.merge(part)
        logger.info("certification finished: %d rows, %d failures",
                    len(report.rows), len(report.failures()))
        return report
