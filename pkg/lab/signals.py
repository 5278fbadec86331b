import logging

from django.dispatch import receiver

from core.signals import report_ready, run_finished
from .models import ExperimentRun

logger = logging.getLogger(__name__)


@receiver(run_finished, sender=ExperimentRun)
def log_run_finished(sender, run, **kwargs):
    level = logging.INFO if run.exit_code == 0 else logging.WARNING
    logger.log(level, "%s finished as %s (exit %s) in %s",
               run.subcommand, run.status, run.exit_code, run.output_dir or '-')


@receiver(report_ready)
def log_report_ready(sender, name, report, **kwargs):
    passed = getattr(report, 'passed', None)
    logger.debug("%s report from %s ready (passed=%s)", name, sender.__name__, passed)
