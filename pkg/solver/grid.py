"""
Periodic collocation grid on [-L, L) and fields sampled on it.

Fields are stored as real collocation values; spectral work goes through
`numpy.fft.rfft`, so only k >= 0 is stored and conjugate symmetry holds by
construction. The Nyquist mode carries no derivative and no dispersion.
"""

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from core.app_settings import lab_settings
from core.services.base import NumericalDefect, ValidationError


@dataclass(frozen=True)
class Grid:
    """
    M collocation points on the periodic box [-L, L).

    Args:
        L: Half-width of the box
        M: Number of points, a power of two
        dealias_fraction: Share of the k >= 0 modes kept after products
    """
    L: float
    M: int
    dealias_fraction: float = None

    def __post_init__(self):
        if self.dealias_fraction is None:
            object.__setattr__(self, 'dealias_fraction',
                               lab_settings.get('SOLVER', 'DEALIAS_FRACTION', 2.0 / 3.0))
        errors = {}
        if not self.L > 0:
            errors['L'] = "must be positive"
        if self.M < 8 or self.M & (self.M - 1):
            errors['M'] = "must be a power of two >= 8"
        if not 0 < self.dealias_fraction <= 1:
            errors['dealias_fraction'] = "must lie in (0, 1]"
        if errors:
            raise ValidationError("invalid grid", errors)

    @classmethod
    def for_spec(cls, L: float, M: int, spec) -> 'Grid':
        """Grid whose mask removes every alias of the products of `spec`."""
        default = lab_settings.get('SOLVER', 'DEALIAS_FRACTION', 2.0 / 3.0)
        return cls(L=L, M=M, dealias_fraction=min(default, spec.required_dealias_fraction))

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.M

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.M)

    @cached_property
    def k(self) -> np.ndarray:
        """Non-negative wavenumbers π/L · {0, ..., M/2}."""
        return np.pi / self.L * np.arange(self.M // 2 + 1)

    @cached_property
    def derivative_k(self) -> np.ndarray:
        """k with the Nyquist entry zeroed."""
        k = self.k.copy()
        k[-1] = 0.0
        return k

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        index = np.arange(self.M // 2 + 1)
        return index < self.dealias_fraction * (self.M // 2)

    @property
    def k_max(self) -> float:
        """Largest wavenumber kept by the dealiasing mask."""
        return float(self.k[self.dealias_mask].max())

    @cached_property
    def symbol(self) -> np.ndarray:
        """(ik)^5 = i k^5 for ∂_x^5."""
        return 1j * self.derivative_k ** 5

    def window(self, fraction: float = 0.5) -> tuple:
        """Trusted window [-fraction L, fraction L]."""
        return -fraction * self.L, fraction * self.L

    def refined(self) -> 'Grid':
        return replace(self, M=2 * self.M)

    def as_dict(self) -> dict:
        return {'L': self.L, 'M': self.M, 'dealias_fraction': self.dealias_fraction}


@dataclass
class Field:
    """Collocation values of u(·, t)."""
    grid: Grid
    values: np.ndarray
    t: float = 0.0
    _spectrum: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.M,):
            raise ValidationError("field does not match its grid",
                                  {'values': f"shape {self.values.shape}, expected ({self.grid.M},)"})
        if self.t < 0:
            raise ValidationError("time must be nonnegative", {'t': self.t})

    @classmethod
    def from_function(cls, grid: Grid, fn, t: float = 0.0) -> 'Field':
        return cls(grid, fn(grid.x), t)

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: np.ndarray, t: float = 0.0) -> 'Field':
        out = cls(grid, np.fft.irfft(spectrum, n=grid.M), t)
        out._spectrum = spectrum
        return out

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            self._spectrum = np.fft.rfft(self.values)
        return self._spectrum

    def derivative(self, j: int) -> np.ndarray:
        """∂_x^j u, spectrally."""
        if j == 0:
            return self.values
        return np.fft.irfft((1j * self.grid.derivative_k) ** j * self.spectrum, n=self.grid.M)

    def derivatives(self, order: int) -> list:
        return [self.derivative(j) for j in range(order + 1)]

    def integral(self, values: np.ndarray = None) -> float:
        """Periodic trapezoidal rule, spectrally accurate for smooth data."""
        return float(np.sum(self.values if values is None else values) * self.grid.dx)

    def mass(self) -> float:
        return self.integral()

    def l2_squared(self) -> float:
        return self.integral(self.values ** 2)

    def check_finite(self, **context) -> None:
        if not np.all(np.isfinite(self.values)):
            raise NumericalDefect("field is no longer finite",
                                  {'t': self.t, **context})

    def copy(self) -> 'Field':
        return Field(self.grid, self.values.copy(), self.t)
