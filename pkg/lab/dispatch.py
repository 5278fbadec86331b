"""
Dispatch of a validated config to the service that owns its subcommand.

Every handler returns an `Outcome`: the service result plus whatever the
emitter needs (tables, fitted constants, per-check verdicts, series).
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from certifier.reports import CSV_COLUMNS as CERT_COLUMNS
from certifier.services import CertifierService
from core.app_settings import lab_settings
from core.services.base import ServiceError, ServiceResult
from decaylab.experiments import DecayConfig
from decaylab.profiles import ProfileSpec
from decaylab.reports import CSV_COLUMNS as DECAY_COLUMNS, DecayReport
from decaylab.services import DecayService
from kernel.services import KernelService
from kernel.tables import CSV_COLUMNS as KERNEL_COLUMNS
from solver.enums import Preset
from solver.grid import Grid
from solver.nonlinearity import NonlinearitySpec, parse_terms, preset
from solver.services import SolverService, trajectory_summary
from .enums import Subcommand

logger = logging.getLogger(__name__)

SOLVE_COLUMNS = ('t', 'mass', 'l2', 'sentinel')

LEDGER_COLUMNS = (
    't', 'energy', 'dE_dt', 'time_term', 'dispersive_term', 'third_term', 'fifth_term',
    'source_term', 'boundary_term', 'residual', 'energy_lhs', 'energy_rhs', 'majorant', 'c0',
)

COEFFICIENT_KEYS = ('c1', 'c', 'b1', 'b2', 'b3')


@dataclass
class Table:
    name: str
    columns: Sequence[str]
    rows: List[Dict[str, str]]


@dataclass
class Outcome:
    """What a subcommand produced, ready for emission."""
    result: ServiceResult
    tables: List[Table] = field(default_factory=list)
    constants: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    series: Dict[str, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 0 if self.result.is_ok else self.result.exit_code


def float_format() -> str:
    return lab_settings.get('RUNS', 'CSV_FLOAT_FORMAT', '.17g')


def _fmt(value: float) -> str:
    return '' if value is None or math.isnan(value) else format(float(value), float_format())


def build_spec(config: Dict[str, Any]) -> NonlinearitySpec:
    """Explicit terms when given, else the preset (zero when neither is set)."""
    if config.get('terms'):
        return NonlinearitySpec.from_terms(parse_terms(config['terms']), name='custom')
    coefficients = {k: config[k] for k in COEFFICIENT_KEYS if config.get(k) is not None}
    return preset(config.get('preset') or Preset.ZERO.value, **coefficients)


def build_grid(config: Dict[str, Any]) -> Grid:
    """An explicit `dealias_fraction` wins; otherwise the one the nonlinearity needs."""
    if config.get('dealias_fraction') is not None:
        return Grid(L=config['L'], M=config['M'], dealias_fraction=config['dealias_fraction'])
    return Grid.for_spec(config['L'], config['M'], build_spec(config))


def build_data_profile(config: Dict[str, Any]) -> ProfileSpec:
    return ProfileSpec(
        kind=config['profile'],
        amplitude=config['amplitude'],
        center=config['center'],
        width=config['width'],
        right_cutoff=config.get('right_cutoff'),
        seed=config['seed'],
        modes=config['modes'],
    )


def build_perturbation(config: Dict[str, Any]) -> ProfileSpec:
    return ProfileSpec(
        kind=config['perturbation_profile'],
        amplitude=config['perturbation_amplitude'],
        center=config['perturbation_center'],
        width=config['perturbation_width'],
        right_cutoff=config.get('right_cutoff'),
        seed=config['seed'] + 1,
        modes=config['modes'],
    )


def build_decay_config(config: Dict[str, Any]) -> DecayConfig:
    extra = {}
    if config.get('epsilon_values'):
        extra['epsilon_values'] = tuple(config['epsilon_values'])
    return DecayConfig(
        grid=build_grid(config),
        spec=build_spec(config),
        T=config['T'],
        dt=config['dt'],
        cadence=config['cadence'],
        profile=build_data_profile(config),
        perturbation=build_perturbation(config),
        a0=config['a0'],
        epsilon=config['epsilon'],
        beta=config['beta'],
        delta=config.get('delta'),
        N=config.get('N', 10),
        window_fraction=config['window_fraction'],
        refine=config['refine'],
        **extra,
    )


# -- handlers ---------------------------------------------------------------

def run_weights_check(config: Dict[str, Any], output_dir: Path) -> Outcome:
    overrides = {key: tuple(config[key]) for key in
                 ('a0_values', 'epsilon_values', 'N_values', 'beta_values', 'delta_values')
                 if config.get(key)}
    result = CertifierService(context={'workers': config['workers']}).certify(**overrides)
    report = result.data
    if report is None:
        return Outcome(result=result)
    checks = {}
    for row in report.rows:
        checks[row.ineq_id] = checks.get(row.ineq_id, True) and row.passed
    return Outcome(
        result=result,
        tables=[Table(Subcommand.WEIGHTS_CHECK.value, CERT_COLUMNS, report.csv_rows(float_format()))],
        constants=report.summary(),
        checks=checks,
    )


def run_kernel(config: Dict[str, Any], output_dir: Path) -> Outcome:
    result = KernelService().tabulate(
        j=config['j'], xmin=config['xmin'], xmax=config['xmax'],
        step=config.get('step'), method=config['method'],
    )
    run = result.data
    if run is None:
        return Outcome(result=result)
    return Outcome(
        result=result,
        tables=[Table(Subcommand.KERNEL.value, KERNEL_COLUMNS, run.table.csv_rows(float_format()))],
        constants={**run.fit.summary(),
                   **{k: v for k, v in run.checks.items() if not isinstance(v, bool)}},
        checks={'envelope_fit': run.fit.passed,
                **{k: v for k, v in run.checks.items() if isinstance(v, bool)}},
        series={'kernel': (run.table.x, run.table.K)},
    )


def run_solve(config: Dict[str, Any], output_dir: Path) -> Outcome:
    grid = build_grid(config)
    spec = build_spec(config)
    f0 = build_data_profile(config).build(grid)
    service = SolverService(context={'cadence': config['cadence']})
    result = service.solve(f0, spec, config['T'], config['dt'],
                           checkpoint=output_dir / 'solve_checkpoint.csv')
    trajectory = result.data
    if trajectory is None:
        return Outcome(result=result)
    mass, l2 = trajectory.series('mass'), trajectory.series('l2')
    rows = [
        {'t': _fmt(t), 'mass': _fmt(m), 'l2': _fmt(e), 'sentinel': _fmt(s)}
        for t, m, e, s in zip(trajectory.times, mass, l2, trajectory.sentinel)
    ]
    summary = trajectory_summary(trajectory)
    return Outcome(
        result=result,
        tables=[Table(Subcommand.SOLVE.value, SOLVE_COLUMNS, rows)],
        constants=summary,
        checks={'sentinel': not trajectory.breached(lab_settings.get('SOLVER', 'SENTINEL_TOLERANCE', 1e-10))},
        series={'mass': (np.asarray(trajectory.times), mass), 'l2': (np.asarray(trajectory.times), l2)},
    )


def _ledger_rows(report: DecayReport) -> List[Dict[str, str]]:
    return [{name: _fmt(getattr(sample, name)) for name in LEDGER_COLUMNS} for sample in report.ledger]


def run_decay(config: Dict[str, Any], output_dir: Path) -> Outcome:
    decay_config = build_decay_config(config)
    subcommand = config['subcommand']
    result = DecayService().run_experiment(subcommand, decay_config)
    report: Optional[DecayReport] = result.data
    if report is None:
        return Outcome(result=result)
    tables = [Table(subcommand, DECAY_COLUMNS, report.csv_rows(float_format()))]
    if report.ledger:
        tables.append(Table(f'{subcommand}_terms', LEDGER_COLUMNS, _ledger_rows(report)))
    series = report.series()
    return Outcome(
        result=result,
        tables=tables,
        constants={k: v for k, v in report.summary().items() if not k.startswith('check_')},
        checks=dict(report.checks),
        series={name: (series['t'], values) for name, values in series.items()
                if name != 't' and not np.all(np.isnan(values))},
    )


HANDLERS: Dict[str, Callable[[Dict[str, Any], Path], Outcome]] = {
    Subcommand.WEIGHTS_CHECK.value: run_weights_check,
    Subcommand.KERNEL.value: run_kernel,
    Subcommand.SOLVE.value: run_solve,
    Subcommand.PERSISTENCE.value: run_decay,
    Subcommand.DIFFERENCE.value: run_decay,
    Subcommand.KATO.value: run_decay,
    Subcommand.LEDGER.value: run_decay,
}


def dispatch(config: Dict[str, Any], output_dir: Path) -> Outcome:
    subcommand = config['subcommand']
    logger.info("dispatching %s", subcommand)
    try:
        return HANDLERS[subcommand](config, output_dir)
    except ServiceError as e:
        logger.error("%s aborted: %s", subcommand, e.message)
        return Outcome(result=ServiceResult.from_error(e))
