"""
Decay experiments: persistence of the moving weight, weighted decay of
differences, the exponential Kato weight and the energy ledger.

Each experiment runs once at M and, when `refine` is set, again at 2M; the
fitted constants must move by less than `LAB['DECAYLAB']['REFINEMENT_TOLERANCE']`.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from core.app_settings import lab_settings
from core.services.base import ValidationError
from solver.grid import Field, Grid
from solver.integrators import Trajectory, evolve
from solver.nonlinearity import NonlinearitySpec
from solver.stability import stability_components
from weights.kato import KatoWeight
from weights.params import DecayLaw
from weights.piecewise import PiecewiseWeight
from .enums import Experiment, ProfileKind
from .ledger import energy_ledger, ledger_tolerance, sample_indices
from .norms import exponential_weight, kato_exponential, kato_saturated, weighted_norm
from .profiles import ProfileSpec
from .reports import DecayReport

logger = logging.getLogger(__name__)


def _default_perturbation() -> ProfileSpec:
    return ProfileSpec(kind=ProfileKind.BUMP.value, amplitude=0.01, center=-20.0, width=4.0)


@dataclass(frozen=True)
class DecayConfig:
    """Everything an experiment needs; built by the `lab` command from its config."""
    grid: Grid
    spec: NonlinearitySpec
    T: float = 1.0
    dt: float = 1e-3
    cadence: int = 10
    profile: ProfileSpec = field(default_factory=ProfileSpec)
    perturbation: ProfileSpec = field(default_factory=_default_perturbation)
    a0: float = 1.0
    epsilon: float = 0.0
    beta: float = 0.3
    delta: Optional[float] = None
    N: int = 10
    epsilon_values: Tuple[float, ...] = (0.0, 0.01, 0.1)
    window_fraction: float = 0.5
    refine: bool = True

    def __post_init__(self):
        errors = {}
        if not self.T > 0:
            errors['T'] = "must be positive"
        if not 0 < self.dt <= self.T:
            errors['dt'] = "must lie in (0, T]"
        if self.cadence < 1:
            errors['cadence'] = "must be at least 1"
        if not self.a0 > 0:
            errors['a0'] = "must be positive"
        if not 0 <= self.epsilon < 1:
            errors['epsilon'] = "must lie in [0, 1)"
        if self.beta < 0:
            errors['beta'] = "must be nonnegative"
        if self.delta is not None and not 0 < self.delta < 1:
            errors['delta'] = "must lie in (0, 1)"
        if not 0 < self.window_fraction <= 1:
            errors['window_fraction'] = "must lie in (0, 1]"
        if errors:
            raise ValidationError("invalid experiment config", errors)

    @property
    def law(self) -> DecayLaw:
        return DecayLaw.from_epsilon(self.a0, self.epsilon)

    @property
    def window(self) -> Tuple[float, float]:
        return self.grid.window(self.window_fraction)

    def refined(self) -> 'DecayConfig':
        """Same experiment at 2M; dt shrinks with the advective constraint."""
        fine = self.grid.refined()
        dt = self.dt
        amplitude = max(abs(self.profile.amplitude), abs(self.perturbation.amplitude))
        coarse_adv = stability_components(self.grid, self.spec, amplitude).advective
        fine_adv = stability_components(fine, self.spec, amplitude).advective
        if math.isfinite(coarse_adv) and math.isfinite(fine_adv):
            dt = dt * min(1.0, fine_adv / coarse_adv)
        steps_per_sample = self.cadence * self.dt / dt
        return replace(self, grid=fine, dt=dt, cadence=max(1, int(round(steps_per_sample))), refine=False)


def _relative_change(coarse: float, fine: float, floor: float = 1e-12) -> float:
    if coarse == fine:
        return 0.0
    return abs(fine - coarse) / max(abs(coarse), abs(fine), floor)


def _stability_check(report: DecayReport, refined: Optional[DecayReport], name: str) -> None:
    if refined is None:
        return
    tolerance = lab_settings.get('DECAYLAB', 'REFINEMENT_TOLERANCE', 0.05)
    coarse, fine = report.constants[name], refined.constants[name]
    change = _relative_change(coarse, fine)
    report.constants[f'{name}_refined'] = fine
    report.constants[f'{name}_change'] = change
    report.checks['refinement_stable'] = bool(change < tolerance)
    report.defect = report.defect or refined.defect


def _sentinel(report: DecayReport, *trajectories: Trajectory) -> None:
    tolerance = lab_settings.get('SOLVER', 'SENTINEL_TOLERANCE', 1e-10)
    report.sentinel_max = max(tr.sentinel_max for tr in trajectories)
    if report.sentinel_max > tolerance:
        report.defect = True
        report.notes.append(f"wraparound sentinel {report.sentinel_max:.2e} above {tolerance:.0e}")
        logger.warning("%s invalidated: %s", report.experiment, report.notes[-1])


def _run(config: DecayConfig, f0: Field, observers: Dict[str, Callable], keep: bool = False) -> Trajectory:
    return evolve(f0, config.spec, config.T, config.dt, observers=observers,
                  cadence=config.cadence, keep=keep)


# -- persistence --------------------------------------------------------------

def _persistence(config: DecayConfig) -> DecayReport:
    law, window = config.law, config.window
    frozen = exponential_weight(config.a0)
    observers = {
        'W_moving': lambda f: weighted_norm(f, exponential_weight(law.a(f.t)), window),
        'W_frozen': lambda f: weighted_norm(f, frozen, window),
    }
    trajectory = _run(config, config.profile.build(config.grid), observers)
    report = DecayReport(experiment=Experiment.PERSISTENCE.value)
    report.times = list(trajectory.times)
    report.a_t = [law.a(t) for t in trajectory.times]
    report.W_moving = list(trajectory.series('W_moving'))
    report.W_frozen = list(trajectory.series('W_frozen'))
    _sentinel(report, trajectory)

    moving = np.asarray(report.W_moving)
    c_star = float(np.max(moving) / moving[0]) if moving[0] > 0 else math.nan
    report.constants['c_star'] = c_star
    report.constants['a_T'] = report.a_t[-1]
    report.checks['finite'] = bool(math.isfinite(c_star))
    report.checks['nonnegative'] = bool(np.all(moving >= 0) and np.all(np.asarray(report.W_frozen) >= 0))
    report.checks['moving_below_frozen'] = bool(
        np.all(moving <= np.asarray(report.W_frozen) * (1 + 1e-12) + 1e-300)
    )
    return report


def persistence_experiment(config: DecayConfig) -> DecayReport:
    """
    W_moving(t) = ∫e^{a(t)x_+^{5/4}}u² and W_frozen(t) = ∫e^{a0 x_+^{5/4}}u²
    on the trusted window; c* = sup_t W_moving(t)/W_moving(0).
    """
    report = _persistence(config)
    if config.refine:
        _stability_check(report, _persistence(config.refined()), 'c_star')
    logger.info("persistence %s: c*=%.6g passed=%s", config.spec.name,
                report.constants['c_star'], report.passed)
    return report


# -- difference ---------------------------------------------------------------

def _difference(config: DecayConfig) -> DecayReport:
    law, window = config.law, config.window
    first = config.profile.build(config.grid)
    bump = config.perturbation.build(config.grid)
    second = Field(config.grid, first.values + bump.values)
    one = _run(config, first, {}, keep=True)
    two = _run(config, second, {}, keep=True)
    frozen = exponential_weight(config.a0)

    report = DecayReport(experiment=Experiment.DIFFERENCE.value)
    report.times = list(one.times)
    report.a_t = [law.a(t) for t in one.times]
    for i, t in enumerate(one.times):
        diff = Field(config.grid, one.snapshots[i] - two.snapshots[i], t)
        report.W_moving.append(weighted_norm(diff, exponential_weight(law.a(t)), window))
        report.W_frozen.append(weighted_norm(diff, frozen, window))
    _sentinel(report, one, two)

    report.Lambda = report.W_frozen[0]
    moving = np.asarray(report.W_moving)
    if report.Lambda == 0:
        c_2star = 0.0
        report.checks['identically_zero'] = bool(np.all(moving == 0))
    else:
        c_2star = float(np.max(moving) / report.Lambda)
    report.constants['c_2star'] = c_2star
    report.checks['finite'] = bool(math.isfinite(report.Lambda) and math.isfinite(c_2star))
    report.checks['moving_below_frozen'] = bool(
        np.all(moving <= np.asarray(report.W_frozen) * (1 + 1e-12) + 1e-300)
    )
    return report


def difference_experiment(config: DecayConfig) -> DecayReport:
    """
    Co-evolve u01 = profile and u02 = profile + perturbation and follow
    ∫e^{a(t)x_+^{5/4}}|u1 - u2|²; Λ is its frozen-weight value at t = 0 and
    c** = sup_t W_moving(t)/Λ.
    """
    report = _difference(config)
    if config.refine and report.Lambda > 0:
        _stability_check(report, _difference(config.refined()), 'c_2star')
    logger.info("difference %s: Lambda=%.6g c**=%.6g passed=%s", config.spec.name,
                report.Lambda, report.constants['c_2star'], report.passed)
    return report


# -- Kato ---------------------------------------------------------------------

def linear_kato_rate(beta: float) -> float:
    """max_k Re (ik - β)^5 = 4β^5, at k² = β²."""
    return 4.0 * beta ** 5


def _fit_growth(times, values) -> float:
    """Smallest γ with ‖e^{βx}u(t)‖ <= e^{γt}‖e^{βx}u0‖ on the samples."""
    times, values = np.asarray(times), np.asarray(values)
    later = times > times[0]
    if values[0] <= 0 or not np.any(later):
        return math.nan
    return float(np.max(np.log(values[later] / values[0]) / (2.0 * (times[later] - times[0]))))


def _kato(config: DecayConfig) -> DecayReport:
    window = config.window
    observers = {'K_beta': lambda f: weighted_norm(f, kato_exponential(config.beta), window, breakpoints=())}
    if config.delta is not None and config.beta > 0:
        # e^{2βx}/(1 + δe^{2βx}) <= e^{2βx}
        log_saturated = kato_saturated(KatoWeight(2.0 * config.beta, config.delta))
        observers['K_delta'] = lambda f: weighted_norm(f, log_saturated, window, breakpoints=())
    trajectory = _run(config, config.profile.build(config.grid), observers)

    report = DecayReport(experiment=Experiment.KATO.value)
    report.times = list(trajectory.times)
    report.K_beta = list(trajectory.series('K_beta'))
    _sentinel(report, trajectory)

    gamma = _fit_growth(report.times, report.K_beta)
    report.constants['gamma'] = gamma
    report.constants['growth_factor'] = math.exp(gamma * config.T) if math.isfinite(gamma) else math.nan
    report.constants['beta'] = config.beta
    report.checks['finite'] = bool(math.isfinite(gamma))
    if config.spec.is_zero:
        sharp = linear_kato_rate(config.beta)
        slack = lab_settings.get('DECAYLAB', 'KATO_GROWTH_SLACK', 0.05)
        report.constants['gamma_linear'] = sharp
        report.checks['below_linear_rate'] = bool(gamma <= sharp * (1 + slack) + 1e-9)
    if 'K_delta' in trajectory.observations:
        saturated = trajectory.series('K_delta')
        report.constants['gamma_delta'] = _fit_growth(report.times, saturated)
        report.checks['saturated_below_exponential'] = bool(
            np.all(saturated <= np.asarray(report.K_beta) * (1 + 1e-12))
        )
    return report


def kato_experiment(config: DecayConfig) -> DecayReport:
    """
    K_β(t) = ∫e^{2βx}u² and the fitted γ in ‖e^{βx}u(t)‖ <= e^{γt}‖e^{βx}u0‖;
    for the linear flow γ is compared with 4β^5.
    """
    report = _kato(config)
    if config.refine:
        _stability_check(report, _kato(config.refined()), 'gamma')
    logger.info("kato %s beta=%s: gamma=%.6g passed=%s", config.spec.name, config.beta,
                report.constants['gamma'], report.passed)
    return report


# -- ledger -------------------------------------------------------------------

def ledger_experiment(config: DecayConfig) -> DecayReport:
    """
    Energy ledger of φ_N along one trajectory. Every step is stored so that
    dE/dt is differenced at the time step; the ledger itself is evaluated
    every `cadence` steps.
    """
    w = PiecewiseWeight.build(config.a0, config.epsilon, config.N)
    trajectory = evolve(config.profile.build(config.grid), config.spec, config.T, config.dt,
                        cadence=1, keep=True)
    samples = energy_ledger(trajectory, w, config.epsilon_values, config.window,
                            stride=config.cadence)
    indices = sample_indices(len(trajectory.times), config.cadence)

    report = DecayReport(experiment=Experiment.LEDGER.value, ledger=samples)
    report.times = [trajectory.times[i] for i in indices]
    report.a_t = [config.law.a(t) for t in report.times]
    report.W_moving = [
        weighted_norm(trajectory.at(i), exponential_weight(a), config.window)
        for i, a in zip(indices, report.a_t)
    ]
    _sentinel(report, trajectory)

    tolerance = ledger_tolerance(config.spec)
    quadrature = lab_settings.get('DECAYLAB', 'QUADRATURE_TOLERANCE', 1e-9)
    worst = max(s.relative_residual for s in samples)
    report.constants['max_relative_residual'] = worst
    report.constants['c0_max'] = max(s.c0 for s in samples)
    report.constants['min_a4_slack'] = min(min(s.a4_slack.values()) for s in samples)
    report.checks['identity'] = bool(worst < tolerance)
    report.checks['cauchy_schwarz_split'] = all(s.a4_holds(quadrature) for s in samples)
    report.checks['energy_inequality'] = all(s.energy_holds(tolerance) for s in samples)
    report.checks['majorant'] = all(s.majorant_holds(quadrature) for s in samples)
    logger.info("ledger %s: worst residual %.2e passed=%s", config.spec.name, worst, report.passed)
    return report


EXPERIMENTS = {
    Experiment.PERSISTENCE: persistence_experiment,
    Experiment.DIFFERENCE: difference_experiment,
    Experiment.KATO: kato_experiment,
    Experiment.LEDGER: ledger_experiment,
}
