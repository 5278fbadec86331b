"""
Integrating-factor RK4 (Lawson) for û_t = (ik)^5 û + N(û),
N(û) = -dealias(F[P(u, ux, uxx, uxxx)]).

The linear propagator e^{ik^5 dt} is applied exactly, so the linear flow is
reproduced to rounding error for any dt.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from core.services.base import NumericalDefect, ValidationError
from .grid import Field, Grid
from .nonlinearity import NonlinearitySpec
from .stability import boundary_mass_fraction, check_dealiasing, stability_limit

logger = logging.getLogger(__name__)

Observer = Callable[[Field], float]


@lru_cache(maxsize=16)
def _propagators(grid: Grid, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    return np.exp(0.5 * dt * grid.symbol), np.exp(dt * grid.symbol)


def nonlinear_term(grid: Grid, spec: NonlinearitySpec, spectrum: np.ndarray) -> np.ndarray:
    """-F[P] with the dealiasing mask applied after the product chain."""
    k = 1j * grid.derivative_k
    u, ux, uxx, uxxx = (np.fft.irfft(k ** j * spectrum, n=grid.M) for j in range(4))
    return -np.fft.rfft(spec(u, ux, uxx, uxxx)) * grid.dealias_mask


def step(f: Field, spec: NonlinearitySpec, dt: float) -> Field:
    """
    One integrating-factor RK4 step.

    Raises:
        ValidationError: If dt is not positive
        NumericalDefect: If the result is not finite
    """
    if not dt > 0:
        raise ValidationError("dt must be positive", {'dt': dt})
    grid = f.grid
    half, full = _propagators(grid, float(dt))
    v = f.spectrum
    if spec.is_zero:
        out = full * v
    else:
        a = nonlinear_term(grid, spec, v)
        b = nonlinear_term(grid, spec, half * (v + 0.5 * dt * a))
        c = nonlinear_term(grid, spec, half * v + 0.5 * dt * b)
        d = nonlinear_term(grid, spec, full * v + dt * half * c)
        out = full * v + dt / 6.0 * (full * a + 2.0 * half * (b + c) + d)
    result = Field.from_spectrum(grid, out, f.t + dt)
    if not np.all(np.isfinite(result.values)):
        raise NumericalDefect(
            "step produced non-finite values",
            {'t': f.t, 'dt': dt, 'max_abs_before': float(np.max(np.abs(f.values)))},
        )
    return result


@dataclass
class Trajectory:
    """Sampled states of one evolution."""
    grid: Grid
    spec: NonlinearitySpec
    dt: float
    times: List[float] = field(default_factory=list)
    snapshots: List[np.ndarray] = field(default_factory=list)
    observations: Dict[str, List[float]] = field(default_factory=dict)
    sentinel: List[float] = field(default_factory=list)
    steps: int = 0

    def record(self, f: Field, observers: Dict[str, Observer], keep: bool) -> None:
        self.times.append(f.t)
        if keep:
            self.snapshots.append(f.values.copy())
        self.sentinel.append(boundary_mass_fraction(f))
        for name, observe in observers.items():
            self.observations.setdefault(name, []).append(float(observe(f)))

    def at(self, i: int) -> Field:
        return Field(self.grid, self.snapshots[i], self.times[i])

    @property
    def final(self) -> Field:
        return self.at(-1)

    def series(self, name: str) -> np.ndarray:
        return np.asarray(self.observations[name])

    @property
    def sentinel_max(self) -> float:
        return max(self.sentinel, default=0.0)

    def breached(self, tolerance: float) -> bool:
        return self.sentinel_max > tolerance

    def drift(self, name: str) -> float:
        values = self.series(name)
        return float(np.max(np.abs(values - values[0])))


def evolve(f0: Field, spec: NonlinearitySpec, T: float, dt: float,
           observers: Optional[Dict[str, Observer]] = None, cadence: int = 1,
           keep: bool = True, amplitude: Optional[float] = None,
           checkpoint: Optional[Callable[[Field], None]] = None) -> Trajectory:
    """
    Step from f0.t to f0.t + T with a fixed step.

    The step is shortened so that an integer number of steps lands on T.

    Args:
        f0: Initial field
        spec: Nonlinearity
        T: Time span
        dt: Requested step
        observers: name -> callable(Field) -> float, sampled every `cadence` steps
        keep: Store the sampled fields
        amplitude: Size of u for the stability check (default max|u0|)
        checkpoint: Called with the final field

    Returns:
        Trajectory sampled at t0, every `cadence` steps and at the end
    """
    if not T > 0 or not dt > 0:
        raise ValidationError("T and dt must be positive", {'T': T, 'dt': dt})
    if cadence < 1:
        raise ValidationError("cadence must be at least 1", {'cadence': cadence})
    f0.check_finite(step=0)
    steps = max(1, math.ceil(T / dt - 1e-9))
    dt = T / steps
    observers = observers or {}

    check_dealiasing(f0.grid, spec)
    if amplitude is None:
        amplitude = float(np.max(np.abs(f0.values)))
    recommended = stability_limit(f0.grid, spec, amplitude)
    if dt > recommended:
        logger.warning("dt %.3e above the recommended %.3e for %s", dt, recommended, spec.name)

    trajectory = Trajectory(grid=f0.grid, spec=spec, dt=dt)
    trajectory.record(f0, observers, keep)
    f = f0
    t0 = f0.t
    for n in range(1, steps + 1):
        f = step(f, spec, dt)
        f.t = t0 + n * dt
        if n % cadence == 0 or n == steps:
            trajectory.record(f, observers, keep)
            logger.debug("t=%.4f max|u|=%.3e", f.t, float(np.max(np.abs(f.values))))
    trajectory.steps = steps
    if checkpoint is not None:
        checkpoint(f)
    logger.info("evolved %s over T=%s in %d steps (dt=%.3e), sentinel max %.2e",
                spec.name, T, steps, dt, trajectory.sentinel_max)
    return trajectory
