"""
Time-step recommendation and the wraparound sentinel.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.app_settings import lab_settings
from .grid import Field, Grid
from .nonlinearity import NonlinearitySpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilityComponents:
    """
    dispersive: phase advance of the highest kept mode, relevant once P
        couples modes; inf for the linear flow
    advective: RK4 reach over the linearized nonlinearity at k_max
    accuracy: the linear-flow step used when nothing else binds
    """
    dispersive: float
    advective: float
    accuracy: float

    @property
    def limit(self) -> float:
        bound = min(self.dispersive, self.advective)
        return self.accuracy if math.isinf(bound) else bound


def stability_components(grid: Grid, spec: NonlinearitySpec, amplitude: float = 1.0) -> StabilityComponents:
    conf = lab_settings.SOLVER
    accuracy = conf['LINEAR_DT']
    if spec.is_zero:
        return StabilityComponents(math.inf, math.inf, accuracy)
    k = grid.k_max
    dispersive = conf['DISPERSIVE_CFL'] / k ** 5
    rate = spec.linearized_rate(abs(amplitude), k)
    advective = conf['ADVECTIVE_CFL'] / rate if rate > 0 else math.inf
    return StabilityComponents(dispersive, advective, accuracy)


def stability_limit(grid: Grid, spec: NonlinearitySpec, amplitude: float = 1.0) -> float:
    """
    Recommended dt. A heuristic, not a guarantee.

    The linear part is integrated exactly, so the zero nonlinearity is
    limited by accuracy only; otherwise the smaller of the dispersive
    (∝ k_max^{-5}) and advective constraints.
    """
    return stability_components(grid, spec, amplitude).limit


def boundary_mass_fraction(field: Field, band: float = None) -> float:
    """Share of ∫u² living within `band`·L of the box edge."""
    band = lab_settings.get('SOLVER', 'SENTINEL_BAND', 0.1) if band is None else band
    total = field.l2_squared()
    if total == 0:
        return 0.0
    edge = np.abs(field.grid.x) >= (1.0 - band) * field.grid.L
    return field.integral(np.where(edge, field.values ** 2, 0.0)) / total


def check_dealiasing(grid: Grid, spec: NonlinearitySpec) -> bool:
    """Warn when the grid keeps more modes than the degree of P allows."""
    need = spec.required_dealias_fraction
    if grid.dealias_fraction > need + 1e-12:
        logger.warning(
            "dealias fraction %.4f looser than %.4f required by degree-%d products of %s",
            grid.dealias_fraction, need, spec.degree, spec.name,
        )
        return False
    return True
