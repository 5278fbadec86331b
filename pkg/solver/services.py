"""
Solver Service Module

Runs one trajectory with the conservation observers attached and reports
drift and the wraparound sentinel.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from core.app_settings import lab_settings
from core.services.base import BaseService, ServiceError, ServiceResult
from core.signals import report_ready
from .checkpoint import write_checkpoint
from .grid import Field
from .integrators import Trajectory, evolve
from .nonlinearity import NonlinearitySpec
from .stability import stability_components

logger = logging.getLogger(__name__)

CONSERVATION_OBSERVERS = {
    'mass': Field.mass,
    'l2': Field.l2_squared,
}


def trajectory_summary(trajectory: Trajectory) -> Dict[str, Any]:
    return {
        'steps': trajectory.steps,
        'dt': trajectory.dt,
        'T': trajectory.times[-1] - trajectory.times[0],
        'mass_drift': trajectory.drift('mass'),
        'l2_drift': trajectory.drift('l2'),
        'sentinel_max': trajectory.sentinel_max,
    }


class SolverService(BaseService):
    """
    Service for the `solve` subcommand.

    Context keys:
        cadence: Observer sampling cadence in steps (default 1)
    """

    def solve(self, f0: Field, spec: NonlinearitySpec, T: float, dt: Optional[float] = None,
              checkpoint: Optional[Path] = None) -> ServiceResult:
        """
        Evolve f0 and check the sentinel.

        Returns:
            ServiceResult with the Trajectory; exit code 3 when the
            wraparound sentinel is breached or a step fails.
        """
        cadence = int(self.context.get('cadence', 1))
        try:
            if dt is None:
                dt = stability_components(f0.grid, spec, float(abs(f0.values).max())).limit
                logger.info("using recommended dt=%.3e", dt)
            trajectory = evolve(
                f0, spec, T, dt, observers=CONSERVATION_OBSERVERS, cadence=cadence,
                checkpoint=(lambda f: write_checkpoint(checkpoint, f, spec)) if checkpoint else None,
            )
        except ServiceError as e:
            logger.error("solve aborted: %s", e.message)
            return ServiceResult.from_error(e)

        summary = trajectory_summary(trajectory)
        report_ready.send(sender=self.__class__, name='solve', report=summary)
        tolerance = lab_settings.get('SOLVER', 'SENTINEL_TOLERANCE', 1e-10)
        if trajectory.breached(tolerance):
            return ServiceResult.fail("wraparound sentinel breached",
                                      summary, exit_code=3, data=trajectory)
        return ServiceResult.ok(trajectory, f"{trajectory.steps} steps")
