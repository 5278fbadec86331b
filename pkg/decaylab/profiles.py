"""
Initial data.

Every profile can be cut off smoothly on the right (`right_cutoff`), which
makes ∫ e^{a x_+^{5/4}} u² finite by construction whatever its native tail.
"""

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Optional

import numpy as np

from core.services.base import ValidationError
from solver.grid import Field, Grid
from weights.cutoff import eta
from .enums import ProfileKind

# width of the right taper
TAPER = 2.0


def _taper(x: np.ndarray, start: float) -> np.ndarray:
    """1 left of `start`, 0 right of start + TAPER, C^∞ in between."""
    return 1.0 - eta(0.5 + 0.25 * (x - start) / TAPER)


@dataclass(frozen=True)
class ProfileSpec:
    kind: str = ProfileKind.GAUSSIAN.value
    amplitude: float = 0.1
    center: float = 0.0
    width: float = 2.0
    right_cutoff: Optional[float] = None
    seed: int = 0
    modes: int = 8

    def __post_init__(self):
        errors = {}
        try:
            ProfileKind(self.kind)
        except ValueError:
            errors['profile'] = f"unknown profile {self.kind!r}; choose from {ProfileKind.values}"
        if not self.width > 0:
            errors['width'] = "must be positive"
        if self.modes < 1:
            errors['modes'] = "must be at least 1"
        if errors:
            raise ValidationError("invalid data profile", errors)

    def values(self, x: np.ndarray) -> np.ndarray:
        s = (x - self.center) / self.width
        kind = ProfileKind(self.kind)
        if kind == ProfileKind.GAUSSIAN:
            u = np.exp(-s ** 2)
        elif kind == ProfileKind.SECH2:
            u = 1.0 / np.cosh(np.clip(s, -350, 350)) ** 2
        elif kind == ProfileKind.BUMP:
            inside = np.abs(s) < 1
            u = np.zeros_like(x)
            u[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        else:
            rng = np.random.default_rng(self.seed)
            k = rng.uniform(0.2, 1.5, self.modes)
            phase = rng.uniform(0.0, 2.0 * np.pi, self.modes)
            carrier = np.cos(np.outer(x - self.center, k) + phase).sum(axis=1) / self.modes
            u = np.exp(-s ** 2) * carrier
        if self.right_cutoff is not None:
            u = u * _taper(x, self.right_cutoff)
        return self.amplitude * u

    def build(self, grid: Grid) -> Field:
        return Field(grid, self.values(grid.x))

    def scaled(self, factor: float) -> 'ProfileSpec':
        return replace(self, amplitude=self.amplitude * factor)

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def build_profile(grid: Grid, kind: str = ProfileKind.GAUSSIAN.value, **params) -> Field:
    """Field for the named profile, e.g. ``build_profile(grid, 'bump', width=4)``."""
    return ProfileSpec(kind=kind, **params).build(grid)
