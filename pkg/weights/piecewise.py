"""
The moving weight φ_N(x, t).

    φ_N = 1                          x <= 0
          exp(a(t) φ(x))             0 <= x <= 1,  φ = (1-η) x_+^5 + η x^{5/4}
          exp(a(t) x^{5/4})          1 <= x <= N
          P_N(x, t)                  x >= N

All evaluation goes through `WeightProfile`, which stores log φ_N and the
ratios ∂_x^j φ_N / φ_N, ∂_t φ_N / φ_N. Certification works on the ratios
directly; absolute values are only formed on request.
"""

import logging
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from core.app_settings import lab_settings
from core.services.base import ValidationError
from .bridge import BridgePolynomial
from .closed_forms import CORE_RATIOS
from .cutoff import Jet, eta_jet
from .enums import Region, Side
from .params import DecayLaw, WeightParams

logger = logging.getLogger(__name__)

MAX_ORDER = 5


@dataclass
class WeightProfile:
    """φ_N sampled at points x for one time t."""
    x: np.ndarray
    t: float
    a: float
    log_value: np.ndarray
    ratios: np.ndarray          # shape (6, n): ∂_x^j φ_N / φ_N
    time_ratio: np.ndarray      # ∂_t φ_N / φ_N
    region: np.ndarray

    def value(self) -> np.ndarray:
        with np.errstate(over='ignore'):
            return np.exp(self.log_value)

    def derivative(self, j: int) -> np.ndarray:
        with np.errstate(over='ignore', invalid='ignore'):
            return np.exp(self.log_value) * self.ratios[j]

    def time_derivative(self) -> np.ndarray:
        with np.errstate(over='ignore', invalid='ignore'):
            return np.exp(self.log_value) * self.time_ratio


@dataclass(frozen=True)
class PiecewiseWeight:
    """Weight φ_N for given parameters; immutable and safe to share."""
    params: WeightParams
    eta_start: float = field(default_factory=lambda: lab_settings.get('WEIGHTS', 'ETA_START', 0.5))
    eta_end: float = field(default_factory=lambda: lab_settings.get('WEIGHTS', 'ETA_END', 0.75))

    @classmethod
    def build(cls, a0: float, epsilon: float = 0.0, N: int = 10) -> 'PiecewiseWeight':
        return cls(WeightParams(a0=a0, epsilon=epsilon, N=N))

    @property
    def law(self) -> DecayLaw:
        return self.params.law

    @property
    def N(self) -> int:
        return self.params.N

    def bridge(self, t: float) -> BridgePolynomial:
        return BridgePolynomial(N=self.N, a=self.law.a(t))

    def blend_jet(self, x: np.ndarray) -> Jet:
        """Jet of φ(x) = (1-η)x^5 + η x^{5/4} at points 0 < x < 1."""
        X = Jet.variable(x)
        phi = X ** 5
        mixed = x > self.eta_start
        if np.any(mixed):
            xm = x[mixed]
            Xm = Jet.variable(xm)
            eta = eta_jet(xm, start=self.eta_start, end=self.eta_end)
            blended = (1.0 - eta) * (Xm ** 5) + eta * (Xm ** 1.25)
            phi.coeffs[:, mixed] = blended.coeffs
        return phi

    def regions(self, x: np.ndarray, side: Side = Side.LEFT) -> np.ndarray:
        N = self.N
        region = np.full(x.shape, Region.CORE.value, dtype=int)
        region[x <= 0] = Region.FLAT.value
        region[(x > 0) & (x < 1)] = Region.BLEND.value
        if side == Side.RIGHT:
            region[x >= N] = Region.BRIDGE.value
        else:
            region[x > N] = Region.BRIDGE.value
        return region

    def profile(self, x, t: float, side: Side = Side.LEFT) -> WeightProfile:
        """
        Evaluate φ_N and all derivative ratios at points x and time t.

        Args:
            x: Points (scalar or array)
            t: Time, t >= 0
            side: One-sided branch used exactly at x = N

        Returns:
            WeightProfile with log values and ratios
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        a = self.law.a(t)
        a_prime = self.law.a_prime(t)
        region = self.regions(x, side)

        log_value = np.zeros(x.shape)
        ratios = np.zeros((MAX_ORDER + 1,) + x.shape)
        ratios[0] = 1.0
        time_ratio = np.zeros(x.shape)

        blend = region == Region.BLEND.value
        if np.any(blend):
            phi = self.blend_jet(x[blend])
            log_value[blend] = a * phi.value
            ratios[:, blend] = (phi * a).shifted_exp().derivatives()
            time_ratio[blend] = a_prime * phi.value

        core = region == Region.CORE.value
        if np.any(core):
            xc = x[core]
            log_value[core] = a * xc ** 1.25
            for j in range(1, MAX_ORDER + 1):
                ratios[j, core] = CORE_RATIOS[j](a, xc)
            time_ratio[core] = a_prime * xc ** 1.25

        right = region == Region.BRIDGE.value
        if np.any(right):
            bp = BridgePolynomial(N=self.N, a=a)
            y = x[right] - self.N
            p = bp.value(y)
            log_value[right] = bp.log_scale + np.log(p)
            for j in range(1, MAX_ORDER + 1):
                ratios[j, right] = bp.value(y, j) / p
            time_ratio[right] = a_prime * (self.N ** 1.25 + bp.S(y) / p)

        return WeightProfile(
            x=x, t=float(t), a=float(a), log_value=log_value,
            ratios=ratios, time_ratio=time_ratio, region=region,
        )


def _check_order(j: int) -> None:
    if j not in range(MAX_ORDER + 1):
        raise ValidationError("derivative order must be 0..5", {'j': j})


def _unwrap(values: np.ndarray, x) -> Union[float, np.ndarray]:
    return float(values[0]) if np.ndim(x) == 0 else values


def weight_profile(w: PiecewiseWeight, x, t: float) -> WeightProfile:
    """log φ_N, ∂_x^jφ_N/φ_N (j = 0..5) and ∂_tφ_N/φ_N at the points x."""
    return w.profile(x, t)


def phi_eval(w: PiecewiseWeight, x, t: float, j: int = 0):
    """∂_x^j φ_N(x, t); left value of ∂_x^5 at x = N."""
    _check_order(j)
    return _unwrap(w.profile(x, t).derivative(j), x)


def phi_eval_right(w: PiecewiseWeight, x, t: float, j: int = 0):
    """Same as phi_eval but using the bridge branch at x = N."""
    _check_order(j)
    return _unwrap(w.profile(x, t, side=Side.RIGHT).derivative(j), x)


def phi_time_derivative(w: PiecewiseWeight, x, t: float):
    """∂_t φ_N(x, t) <= 0."""
    return _unwrap(w.profile(x, t).time_derivative(), x)


def log_phi(w: PiecewiseWeight, x, t: float):
    return _unwrap(w.profile(x, t).log_value, x)


def dominance_holds(params: WeightParams, x, tolerance: float = 1e-12) -> bool:
    """φ_N(x, 0) <= e^{a0 x_+^{5/4}} at every point x (compared in log space)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    profile = PiecewiseWeight(params).profile(x, 0.0)
    reference = params.a0 * np.clip(x, 0.0, None) ** 1.25
    return bool(np.all(profile.log_value <= reference + tolerance * (1.0 + np.abs(reference))))


def fit_dominance_constant(a0: float, N_values=range(1, 201), span: float = 100.0,
                           step: float = 0.01, epsilon: float = 0.0):
    """
    Smallest N (from `N_values`) past which initial dominance holds for every
    larger candidate, and the constant c with n0_threshold(a0, c) == N.

    Returns:
        (N_pass, c); (None, None) when no candidate passes
    """
    candidates = sorted(int(n) for n in N_values)
    passing = []
    for N in candidates:
        x = np.arange(N, N + span + step / 2, step)
        passing.append(dominance_holds(WeightParams(a0=a0, epsilon=epsilon, N=N), x))

    n_pass = None
    for N, ok in zip(reversed(candidates), reversed(passing)):
        if not ok:
            break
        n_pass = N
    if n_pass is None:
        logger.warning("initial dominance fails for every candidate N at a0=%s", a0)
        return None, None
    return n_pass, a0 * (n_pass - 0.5) ** 1.25
