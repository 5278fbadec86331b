"""
Decay Laboratory Service Module
"""

import logging

from core.services.base import BaseService, ServiceError, ServiceResult
from core.signals import report_ready
from .enums import Experiment
from .experiments import EXPERIMENTS, DecayConfig
from .reports import DecayReport

logger = logging.getLogger(__name__)


class DecayService(BaseService):
    """Runs one decay experiment and maps its verdict onto an exit code."""

    def run_experiment(self, experiment, config: DecayConfig) -> ServiceResult:
        """
        Returns:
            ServiceResult with the DecayReport; exit code 2 when a check
            fails and 3 when the run was invalidated by a numerical defect.
        """
        try:
            experiment = Experiment(experiment)
        except ValueError:
            return ServiceResult.fail("unknown experiment", {'subcommand': str(experiment)})
        try:
            report: DecayReport = EXPERIMENTS[experiment](config)
        except ServiceError as e:
            logger.error("%s aborted: %s", experiment.value, e.message)
            return ServiceResult.from_error(e)

        report_ready.send(sender=self.__class__, name=experiment.value, report=report)
        if report.defect:
            return ServiceResult.fail("run invalidated", {'notes': report.notes}, exit_code=3, data=report)
        if not report.passed:
            return ServiceResult.fail(f"checks failed: {', '.join(report.failed_checks())}",
                                      report.summary(), exit_code=2, data=report)
        return ServiceResult.ok(report, f"{experiment.value} passed")
