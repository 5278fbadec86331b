"""
Run lifecycle:

    pending -> running -> passed | failed | defective
    pending -> rejected
"""

from django.utils import timezone

from core.state_machine import StateMachine, Transition
from .enums import RunStatus


def _finish(run, **kwargs):
    run.finished_at = timezone.now()


class RunWorkflow(StateMachine):
    """Workflow for ExperimentRun entities."""

    start = Transition(
        source=RunStatus.PENDING,
        target=RunStatus.RUNNING,
        trigger='start'
    )
    reject = Transition(
        source=RunStatus.PENDING,
        target=RunStatus.REJECTED,
        trigger='reject',
        after=_finish
    )
    succeed = Transition(
        source=RunStatus.RUNNING,
        target=RunStatus.PASSED,
        trigger='succeed',
        after=_finish
    )
    fail = Transition(
        source=RunStatus.RUNNING,
        target=RunStatus.FAILED,
        trigger='fail',
        after=_finish
    )
    defect = Transition(
        source=RunStatus.RUNNING,
        target=RunStatus.DEFECTIVE,
        trigger='defect',
        after=_finish
    )


# trigger that closes a running run with a given exit code
FINISH_TRIGGERS = {0: 'succeed', 1: 'fail', 2: 'fail', 3: 'defect'}
