"""
Flat ``key = value`` experiment config files.

    # persistence run on the kdv5 preset
    subcommand = persistence
    preset = kdv5
    epsilon_values = 0, 0.01, 0.1

Lines starting with ``#`` and blank lines are ignored. Values are kept as
strings; typing is the serializer's job.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Union

from core.services.base import ValidationError

COMMENT = '#'


def load_config(text: str) -> Dict[str, str]:
    """
    Parse config text into a mapping of key -> raw string value.

    Raises:
        ValidationError: On a line without ``=`` or a repeated key
    """
    config: Dict[str, str] = {}
    errors = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT):
            continue
        key, sep, value = line.partition('=')
        key = key.strip()
        if not sep or not key:
            errors[f'line {number}'] = f"expected 'key = value', got {raw!r}"
            continue
        if key in config:
            errors[key] = f"repeated on line {number}"
            continue
        config[key] = value.strip()
    if errors:
        raise ValidationError("malformed config file", errors)
    return config


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ValidationError("cannot read config file", {'config': f"{path}: {e.strerror}"})
    return load_config(text)


def format_value(value: Any) -> str:
    """Lossless text form: repr for floats, comma joined lists."""
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ', '.join(format_value(v) for v in value)
    if value is None:
        return ''
    return str(value)


def dump_config(config: Mapping[str, Any], header: Iterable[str] = ()) -> str:
    lines = [f'{COMMENT} {line}' for line in header]
    lines += [f'{key} = {format_value(value)}' for key, value in config.items() if value is not None]
    return '\n'.join(lines) + '\n'


def merge_config(*layers: Mapping[str, Any]) -> Dict[str, Any]:
    """Later layers win; None values never override."""
    merged: Dict[str, Any] = {}
    for layer in layers:
        merged.update({k: v for k, v in layer.items() if v is not None})
    return merged


def parse_assignments(items: Iterable[str], option: str = 'set') -> Dict[str, str]:
    """``['a0=1', 'N=10']`` -> ``{'a0': '1', 'N': '10'}``."""
    out = {}
    for item in items or ():
        key, sep, value = item.partition('=')
        if not sep or not key.strip():
            raise ValidationError(f"--{option} expects key=value", {option: item})
        out[key.strip()] = value.strip()
    return out
