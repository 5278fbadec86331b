"""
Laboratory settings accessor.

Merges the `LAB` dict of the active Django settings over the defaults in
`config/settings/numerics.py`, section by section, so a deployment can
override a single key. Works without configured settings (plain defaults),
which keeps the numerical apps importable from a bare interpreter.
"""

from typing import Any, Dict

from django.conf import settings

from config.settings.numerics import LAB as DEFAULTS


class LabSettings:
    """Section-wise view over `settings.LAB`."""

    def __init__(self, defaults: Dict[str, Dict[str, Any]]):
        self._defaults = defaults

    def section(self, name: str) -> Dict[str, Any]:
        merged = dict(self._defaults.get(name, {}))
        if settings.configured:
            merged.update(getattr(settings, 'LAB', {}).get(name, {}))
        return merged

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.section(section).get(key, default)

    def __getattr__(self, name: str) -> Dict[str, Any]:
        if name.isupper():
            return self.section(name)
        raise AttributeError(name)


lab_settings = LabSettings(DEFAULTS)
