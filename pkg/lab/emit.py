"""
Run artifacts.

A run directory holds ``<subcommand>.csv`` (plus any extra tables),
``summary.csv`` with one line of fitted constants, ``manifest.json`` and
two-column ``.dat`` series for plotting. Only the manifest carries a
timestamp, so two runs of one config give identical CSVs.
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Sequence

import numpy as np
from django.conf import settings
from django.core.serializers.json import DjangoJSONEncoder
from django.utils import timezone

from . import __version__
from .dispatch import Outcome, float_format

logger = logging.getLogger(__name__)

MANIFEST = 'manifest.json'
SUMMARY = 'summary.csv'


class ManifestEncoder(DjangoJSONEncoder):
    """JSON for numpy scalars and arrays on top of Django's types."""

    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (set, tuple)):
            return list(o)
        try:
            return super().default(o)
        except TypeError:
            return str(o)


def _finite_or_none(value: Any) -> Any:
    """NaN and inf are not JSON; they become null."""
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    if isinstance(value, Mapping):
        return {str(k): _finite_or_none(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(v) for v in value]
    return value


def jsonable(value: Any) -> Any:
    """Plain JSON types only; numpy values are converted and NaN becomes null."""
    return json.loads(json.dumps(_finite_or_none(value), cls=ManifestEncoder))


def run_directory(config: Mapping[str, Any]) -> Path:
    """``output`` from the config, else ``LAB_OUTPUT_DIR/<subcommand>``."""
    output = config.get('output')
    if output:
        return Path(output)
    base = getattr(settings, 'LAB_OUTPUT_DIR', 'runs')
    return Path(base) / config['subcommand']


def format_cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return '1' if value else '0'
    if isinstance(value, (float, np.floating)):
        return '' if math.isnan(value) else format(float(value), float_format())
    if isinstance(value, (list, tuple)):
        return ';'.join(format_cell(v) for v in value)
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Sequence[Mapping[str, str]]) -> Path:
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns), lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)
    return path


def write_summary(path: Path, constants: Mapping[str, Any]) -> Path:
    row = {name: format_cell(value) for name, value in constants.items()}
    return write_csv(path, list(row), [row])


def write_series(path: Path, t: np.ndarray, values: np.ndarray) -> Path:
    np.savetxt(path, np.column_stack([t, values]), fmt='%.17g')
    return path


def manifest(config: Mapping[str, Any], outcome: Outcome) -> Dict[str, Any]:
    return _finite_or_none({
        'subcommand': config['subcommand'],
        'code_version': __version__,
        'config': dict(config),
        'constants': dict(outcome.constants),
        'checks': dict(outcome.checks),
        'passed': outcome.result.is_ok,
        'exit_code': outcome.exit_code,
        'message': outcome.result.message,
        'errors': outcome.result.errors,
        'timestamp': timezone.now().isoformat(),
    })


def write_manifest(path: Path, config: Mapping[str, Any], outcome: Outcome) -> Path:
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(manifest(config, outcome), handle, cls=ManifestEncoder, indent=2, sort_keys=True)
        handle.write('\n')
    return path


def emit(config: Mapping[str, Any], outcome: Outcome, output_dir: Path) -> Dict[str, Path]:
    """Write every artifact of a run into `output_dir`; returns name -> path."""
    output_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for table in outcome.tables:
        written[table.name] = write_csv(output_dir / f'{table.name}.csv', table.columns, table.rows)
    if outcome.constants:
        written['summary'] = write_summary(output_dir / SUMMARY, outcome.constants)
    for name, (t, values) in outcome.series.items():
        written[f'{name}.dat'] = write_series(output_dir / f'{name}.dat', t, values)
    written['manifest'] = write_manifest(output_dir / MANIFEST, config, outcome)
    logger.info("wrote %d artifact(s) to %s", len(written), output_dir)
    return written
