"""
Laboratory Run Service Module

Validates a raw config, walks an ExperimentRun through its workflow,
dispatches to the owning app and writes the run artifacts.
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from core.app_settings import lab_settings
from core.services.base import BaseService, ServiceResult, ValidationError
from core.signals import run_finished
from . import __version__
from .dispatch import Outcome, dispatch
from .emit import emit, jsonable, run_directory
from .models import ExperimentRun
from .serializers import ExperimentConfigSerializer
from .workflows import FINISH_TRIGGERS, RunWorkflow

logger = logging.getLogger(__name__)


@dataclass
class RunRecord:
    """Result payload of one `lab` run."""
    run: ExperimentRun
    config: Dict[str, Any]
    outcome: Optional[Outcome] = None
    output_dir: Optional[Path] = None
    artifacts: Dict[str, Path] = field(default_factory=dict)


def _flatten_errors(errors: Mapping[str, Any]) -> Dict[str, str]:
    flat = {}
    for key, value in errors.items():
        if isinstance(value, Mapping):
            flat.update({f'{key}.{k}': v for k, v in _flatten_errors(value).items()})
        elif isinstance(value, (list, tuple)):
            flat[key] = '; '.join(str(v) for v in value)
        else:
            flat[key] = str(value)
    return flat


def validate_config(raw: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Typed config.

    Raises:
        ValidationError: With one message per field
    """
    serializer = ExperimentConfigSerializer(data=dict(raw))
    if not serializer.is_valid():
        raise ValidationError("invalid config", _flatten_errors(serializer.errors))
    return dict(serializer.validated_data)


class RunService(BaseService):
    """
    Service behind the `lab` management command.

    Context keys:
        record: Persist ExperimentRun rows (default `LAB['RUNS']['RECORD']`)
    """

    model_class = ExperimentRun
    workflow_class = RunWorkflow

    @property
    def recording(self) -> bool:
        record = self.context.get('record')
        return lab_settings.get('RUNS', 'RECORD', False) if record is None else bool(record)

    def _save(self, run: ExperimentRun) -> None:
        if self.recording:
            run.save()

    def validate(self, data: Dict[str, Any]) -> Dict[str, Any]:
        return validate_config(data)

    def execute(self, raw: Mapping[str, Any]) -> ServiceResult:
        """
        Run one config end to end.

        Returns:
            ServiceResult carrying a RunRecord; its exit code is the
            command's exit status (0 pass, 1 config, 2 failure, 3 defect).
        """
        run = ExperimentRun(subcommand=str(raw.get('subcommand', '')), config=dict(raw),
                            code_version=__version__)
        self._save(run)
        try:
            config = self.validate(raw)
        except ValidationError as e:
            logger.error("config rejected: %s", e.errors)
            run.exit_code, run.message = e.exit_code, e.message
            self.execute_workflow_trigger(run, 'reject', save=self.recording)
            run_finished.send(sender=ExperimentRun, run=run)
            return ServiceResult.from_error(e, data=RunRecord(run=run, config=dict(raw)))

        run.config = config
        self.execute_workflow_trigger(run, 'start', save=self.recording)

        output_dir = run_directory(config)
        output_dir.mkdir(parents=True, exist_ok=True)
        outcome = dispatch(config, output_dir)
        artifacts = emit(config, outcome, output_dir)

        run.exit_code = outcome.exit_code
        run.passed = outcome.result.is_ok
        run.message = outcome.result.message
        run.constants = jsonable(outcome.constants)
        run.output_dir = str(output_dir)
        self.execute_workflow_trigger(run, FINISH_TRIGGERS[outcome.exit_code], save=self.recording)
        run_finished.send(sender=ExperimentRun, run=run)

        record = RunRecord(run=run, config=config, outcome=outcome, output_dir=output_dir,
                           artifacts=artifacts)
        if outcome.result.is_ok:
            return ServiceResult.ok(record, outcome.result.message)
        return ServiceResult.fail(outcome.result.message, outcome.result.errors,
                                  exit_code=outcome.exit_code, data=record)

    def sweep(self, raw: Mapping[str, Any], key: str, values: Sequence[str],
              workers: int = 1) -> List[ServiceResult]:
        """
        One run per value of `key`, each in `<output>/<key>=<value>`.

        Children never record; the parent records nothing either, so the
        sqlite file is not written from several processes.
        """
        base = run_directory(raw)
        configs = []
        for value in values:
            child = dict(raw)
            child[key] = value
            child['output'] = str(base / f'{key}={value}')
            configs.append(child)
        logger.info("sweeping %s over %d value(s) on %d worker(s)", key, len(configs), workers)
        if workers > 1 and len(configs) > 1:
            with Pool(processes=workers) as pool:
                return pool.map(_sweep_task, configs)
        return [_sweep_task(child) for child in configs]


def _sweep_task(raw: Dict[str, Any]) -> ServiceResult:
    return RunService(context={'record': False}).execute(raw)
