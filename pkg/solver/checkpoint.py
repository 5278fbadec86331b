"""
Checkpoints of a single field.

CSV: ``# key = value`` header lines (L, M, t, preset, coefficients) followed
by ``x,u`` rows. NPZ: the same header as arrays next to ``x`` and ``u``.
"""

import csv
import logging
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from core.services.base import ValidationError
from .enums import CheckpointFormat
from .grid import Field, Grid
from .nonlinearity import NonlinearitySpec

logger = logging.getLogger(__name__)


def _header(field: Field, spec: NonlinearitySpec) -> Dict[str, str]:
    return {
        'L': repr(float(field.grid.L)),
        'M': str(field.grid.M),
        'dealias_fraction': repr(float(field.grid.dealias_fraction)),
        't': repr(float(field.t)),
        'preset': spec.name,
        'coefficients': '; '.join(spec.coefficients()),
    }


def _format(path: Path) -> CheckpointFormat:
    return CheckpointFormat.NPZ if path.suffix == '.npz' else CheckpointFormat.CSV


def write_checkpoint(path: Union[str, Path], field: Field, spec: NonlinearitySpec) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _header(field, spec)
    if _format(path) == CheckpointFormat.NPZ:
        np.savez(path, x=field.grid.x, u=field.values, **{k: np.array(v) for k, v in header.items()})
    else:
        with path.open('w', newline='') as fh:
            for key, value in header.items():
                fh.write(f'# {key} = {value}\n')
            writer = csv.writer(fh)
            writer.writerow(['x', 'u'])
            writer.writerows((repr(float(x)), repr(float(u))) for x, u in zip(field.grid.x, field.values))
    logger.info("checkpoint written to %s", path)
    return path


def read_checkpoint(path: Union[str, Path]) -> Tuple[Field, Dict[str, str]]:
    """
    Returns:
        (field, header) with the header values as strings

    Raises:
        ValidationError: If the file is missing or its header is incomplete
    """
    path = Path(path)
    if not path.exists():
        raise ValidationError("checkpoint not found", {'path': str(path)})
    if _format(path) == CheckpointFormat.NPZ:
        with np.load(path) as data:
            header = {k: str(data[k]) for k in data.files if k not in ('x', 'u')}
            values = data['u'].copy()
    else:
        header, rows = {}, []
        with path.open(newline='') as fh:
            lines = [line for line in fh]
        body = []
        for line in lines:
            if line.startswith('#'):
                key, _, value = line[1:].partition('=')
                header[key.strip()] = value.strip()
            else:
                body.append(line)
        for row in csv.DictReader(body):
            rows.append(float(row['u']))
        values = np.array(rows)
    missing = {'L', 'M', 't'} - set(header)
    if missing:
        raise ValidationError("checkpoint header incomplete", {'missing': sorted(missing)})
    grid = Grid(float(header['L']), int(header['M']),
                float(header['dealias_fraction']) if 'dealias_fraction' in header else None)
    return Field(grid, values, float(header['t'])), header
