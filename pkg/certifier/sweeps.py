"""
Sweep grids for the certifier.

A `SweepSpec` fully determines a certification run: identical specs give
bitwise identical reports.
"""

import logging
from dataclasses import asdict, dataclass, replace
from typing import Iterator, Tuple

import numpy as np

from core.app_settings import lab_settings
from core.services.base import ValidationError
from weights.params import WeightParams

logger = logging.getLogger(__name__)


def _section():
    return lab_settings.CERTIFIER


@dataclass(frozen=True)
class SweepSpec:
    """Parameter grids of a certification sweep."""
    a0_values: Tuple[float, ...] = ()
    epsilon_values: Tuple[float, ...] = ()
    N_values: Tuple[int, ...] = ()
    x_min: float = -10.0
    x_tail: float = 50.0
    x_step: float = 0.01
    t_max: float = 1.0
    t_step: float = 0.05
    overflow_cap: float = 600.0
    bridge_y_max: float = 200.0
    bridge_y_points: int = 4001
    beta_values: Tuple[float, ...] = ()
    delta_values: Tuple[float, ...] = ()
    kato_bx_range: float = 30.0
    kato_bx_points: int = 6001
    refinement_tolerance: float = 0.05
    uniformity_tolerance: float = 0.10
    matching_tolerance: float = 1e-9
    slack_tolerance: float = 1e-12
    refine: bool = True

    def __post_init__(self):
        errors = {}
        if self.x_step <= 0:
            errors['x_step'] = "must be positive"
        if self.t_step <= 0 or self.t_max < 0:
            errors['t_step'] = "t_step must be positive and t_max nonnegative"
        if self.bridge_y_points < 2 or self.kato_bx_points < 2:
            errors['points'] = "grids need at least two points"
        if any(not (0 < d < 1) for d in self.delta_values):
            errors['delta_values'] = "every delta must lie in (0, 1)"
        if any(b <= 0 for b in self.beta_values):
            errors['beta_values'] = "every beta must be positive"
        if errors:
            raise ValidationError("Invalid sweep", errors)

    @classmethod
    def from_settings(cls, **overrides) -> 'SweepSpec':
        """Defaults from `LAB['CERTIFIER']`, then keyword overrides."""
        conf = _section()
        values = dict(
            a0_values=tuple(conf['A0_VALUES']),
            epsilon_values=tuple(conf['EPSILON_VALUES']),
            N_values=tuple(int(n) for n in conf['N_VALUES']),
            x_min=conf['X_MIN'],
            x_tail=conf['X_TAIL'],
            x_step=conf['X_STEP'],
            t_max=conf['T_MAX'],
            t_step=conf['T_STEP'],
            overflow_cap=lab_settings.get('WEIGHTS', 'OVERFLOW_CAP', 600.0),
            bridge_y_max=conf['BRIDGE_Y_MAX'],
            bridge_y_points=conf['BRIDGE_Y_POINTS'],
            beta_values=tuple(conf['KATO_BETA_VALUES']),
            delta_values=tuple(conf['KATO_DELTA_VALUES']),
            kato_bx_range=conf['KATO_BX_RANGE'],
            kato_bx_points=conf['KATO_BX_POINTS'],
            refinement_tolerance=conf['REFINEMENT_TOLERANCE'],
            uniformity_tolerance=conf['N_UNIFORMITY_TOLERANCE'],
            matching_tolerance=conf['MATCHING_TOLERANCE'],
            slack_tolerance=conf['SLACK_TOLERANCE'],
        )
        values.update(overrides)
        for key in ('a0_values', 'epsilon_values', 'N_values', 'beta_values', 'delta_values'):
            values[key] = tuple(values[key])
        return cls(**values)

    def refined(self) -> 'SweepSpec':
        """Twice the density in x, t and the bridge/Kato grids; never refined again."""
        return replace(
            self,
            x_step=self.x_step / 2,
            t_step=self.t_step / 2,
            bridge_y_points=2 * self.bridge_y_points - 1,
            kato_bx_points=2 * self.kato_bx_points - 1,
            refine=False,
        )

    def x_grid(self, N: int) -> np.ndarray:
        """x_min .. N + x_tail in steps of x_step, always containing 0, 1/2, 3/4, 1 and N."""
        x_max = N + self.x_tail
        count = int(np.floor((x_max - self.x_min) / self.x_step + 1e-9))
        grid = self.x_min + self.x_step * np.arange(count + 1)
        return np.union1d(grid, [0.0, 0.5, 0.75, 1.0, float(N), x_max])

    def t_grid(self) -> np.ndarray:
        count = int(np.floor(self.t_max / self.t_step + 1e-9))
        return np.union1d(self.t_step * np.arange(count + 1), [self.t_max])

    def y_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.bridge_y_max, self.bridge_y_points)

    def kato_x_grid(self, beta: float) -> np.ndarray:
        return np.linspace(-self.kato_bx_range, self.kato_bx_range, self.kato_bx_points) / beta

    def weight_points(self) -> Iterator[WeightParams]:
        """Every (a0, epsilon, N) under the overflow cap; capped points are logged and skipped."""
        for a0 in self.a0_values:
            for epsilon in self.epsilon_values:
                for N in self.N_values:
                    params = WeightParams(a0=a0, epsilon=epsilon, N=N)
                    if params.exponent_at_matching_point() > self.overflow_cap:
                        logger.warning(
                            "skipping a0=%s N=%s: a0 N^{5/4} = %.1f above cap %.1f",
                            a0, N, params.exponent_at_matching_point(), self.overflow_cap,
                        )
                        continue
                    yield params

    def as_dict(self) -> dict:
        return asdict(self)
