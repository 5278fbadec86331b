"""
Weighted energy ledger along a trajectory.

At every stored sample the terms of the identity obtained by multiplying
∂_t u - ∂_x^5 u = F (F = -P) by uφ_N and integrating by parts are evaluated
on the trusted window; d/dt ∫u²φ_N comes from centered differences of the
stored energies.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from certifier.checks import master_over_phi
from core.app_settings import lab_settings
from core.services.base import NumericalDefect, ValidationError
from solver.grid import Field
from solver.integrators import Trajectory
from weights.params import split_coefficient
from weights.piecewise import PiecewiseWeight
from .norms import weight_breakpoints
from .quadrature import field_derivatives_at, spectral_interpolate, window_rule
from .reports import LedgerSample

logger = logging.getLogger(__name__)

# points per unit length of the grid on which c0(t) = sup L/φ is taken
C0_DENSITY = 100


def boundary_flux(u: Sequence[float], phi: Sequence[float]) -> float:
    """
    G with dG/dx = 2uu₅φ + 5u₂²φ₁ - 5u₁²φ₃ + u²φ₅, from the derivative values
    u = (u, u₁, .., u₄) and phi = (φ, φ₁, .., φ₄) at one point.
    """
    u0, u1, u2, u3, u4 = u
    p0, p1, p2, p3, p4 = phi
    return (
        p0 * (2 * u0 * u4 - 2 * u1 * u3 + u2 ** 2)
        - 2 * p1 * u0 * u3 + 4 * p1 * u1 * u2
        + 2 * p2 * u0 * u2 - 3 * p2 * u1 ** 2
        - 2 * p3 * u0 * u1 + p4 * u0 ** 2
    )


def time_derivative(times: np.ndarray, values: np.ndarray, i: int) -> float:
    """Centered difference, fourth order on uniform stencils, else second order."""
    if 2 <= i <= len(times) - 3:
        h = np.diff(times[i - 2:i + 3])
        if np.allclose(h, h[0], rtol=1e-9, atol=0.0):
            f = values[i - 2:i + 3]
            return float((f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h[0]))
    return float(np.gradient(values[i - 1:i + 2], times[i - 1:i + 2])[1])


def _weight_at(w: PiecewiseWeight, x: np.ndarray, t: float):
    profile = w.profile(x, t)
    phi = profile.value()
    if not np.all(np.isfinite(phi)):
        raise NumericalDefect("weight overflows on the ledger window",
                              {'t': t, 'N': w.N, 'a0': w.params.a0})
    return profile, phi


def sup_master(w: PiecewiseWeight, t: float, window: Tuple[float, float], epsilon: float) -> float:
    """c0(t) = sup of L/φ_N over a fine grid of the window."""
    lo, hi = window
    x = np.linspace(lo, hi, int((hi - lo) * C0_DENSITY) + 1)
    values, _ = master_over_phi(w.profile(x, t), epsilon)
    return float(np.max(values))


def ledger_rule(w: PiecewiseWeight, window: Tuple[float, float], dx: float,
                blend_panel: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature for the ledger integrals: panels of 4dx, split at the weight
    breakpoints, graded towards 0 and both ends of the cutoff transition,
    and no wider than `blend_panel` inside it, where ∂⁵φ_N is of order 1e7.
    """
    if blend_panel is None:
        blend_panel = lab_settings.get('DECAYLAB', 'BLEND_PANEL', 0.005)
    return window_rule(
        window, weight_breakpoints(w), 4.0 * dx,
        grade_at=(0.0, w.eta_start, w.eta_end),
        fine=((w.eta_start, w.eta_end, blend_panel),),
    )


def sample_indices(count: int, stride: int) -> List[int]:
    """Every `stride`-th stored index plus the last one."""
    return sorted(set(range(0, count, stride)) | {count - 1})


def energy_ledger(trajectory: Trajectory, w: PiecewiseWeight,
                  epsilon_values: Iterable[float] = (0.0,),
                  window: Optional[Tuple[float, float]] = None,
                  c0: Optional[float] = None, stride: int = 1) -> List[LedgerSample]:
    """
    Ledger samples at every interior sample time.

    Energies are differenced on the stored times themselves, so a trajectory
    stored at every step gives dE/dt to O(dt⁴) while `stride` keeps the
    number of full ledger evaluations down.

    Args:
        trajectory: Trajectory with snapshots (evolve(..., keep=True))
        w: Weight φ_N
        epsilon_values: ε values for the Cauchy-Schwarz split
        window: Integration window (default the trusted half of the box);
            must start at x <= 0
        c0: Constant of the majorant c0∫u²φ + 2∫uFφ (default sup L/φ on the
            window at each time)
        stride: Stored times between ledger samples

    Returns:
        One LedgerSample per interior index of `sample_indices(len, stride)`
    """
    if len(trajectory.snapshots) != len(trajectory.times):
        raise ValidationError("ledger needs stored snapshots", {'keep': False})
    if len(trajectory.times) < 3:
        raise ValidationError("ledger needs at least three samples", {'samples': len(trajectory.times)})
    if stride < 1:
        raise ValidationError("stride must be at least 1", {'stride': stride})
    grid = trajectory.grid
    window = window or grid.window()
    if window[0] > 0:
        raise ValidationError("ledger window must start in the flat region x <= 0", {'window': window})
    epsilon_values = tuple(epsilon_values)
    epsilon = w.params.epsilon
    x, q = ledger_rule(w, window, grid.dx)
    edges = np.array(window, dtype=float)
    spec = trajectory.spec
    times = np.asarray(trajectory.times)
    interior = sample_indices(len(times), stride)[1:-1]
    if not interior:
        raise ValidationError("stride leaves no interior sample", {'stride': stride})

    energies = np.full(len(times), np.nan)
    stencil = sorted({j for i in interior for j in range(i - 2, i + 3) if 0 <= j < len(times)})
    for j in stencil:
        u0 = spectral_interpolate(trajectory.at(j), x)
        _, phi = _weight_at(w, x, float(times[j]))
        energies[j] = np.sum(q * u0 ** 2 * phi)

    samples = []
    for i in interior:
        field = trajectory.at(i)
        t = float(times[i])
        u = field_derivatives_at(field, x, 4)
        profile, phi = _weight_at(w, x, t)
        d = profile.ratios * phi
        u0, u1, u2, u3 = u[0], u[1], u[2], u[3]
        F = np.zeros_like(u0) if spec.is_zero else -spec(u0, u1, u2, u3)

        dE = time_derivative(times, energies, i)
        time_term = np.sum(q * u0 ** 2 * phi * profile.time_ratio)
        dispersive = 5.0 * np.sum(q * u2 ** 2 * d[1])
        third = -5.0 * np.sum(q * u1 ** 2 * d[3])
        fifth = np.sum(q * u0 ** 2 * d[5])
        source = 2.0 * np.sum(q * F * u0 * phi)
        boundary = _boundary_term(field, w, edges, t)
        residual = dE - time_term + dispersive + third + fifth - source - boundary

        positive = d[1] > 0
        with np.errstate(divide='ignore', invalid='ignore'):
            split = np.where(positive, d[3] ** 2 / np.where(positive, d[1], 1.0), 0.0)
        cross = 5.0 * abs(np.sum(q * u0 * u2 * d[3]))
        a4 = {
            float(eps): float((5.0 - eps) * np.sum(q * u2 ** 2 * d[1])
                              + split_coefficient(eps) * np.sum(q * u0 ** 2 * split) - cross)
            for eps in epsilon_values
        }

        master, _ = master_over_phi(profile, epsilon)
        energy_lhs = dE - boundary + epsilon * np.sum(q * u2 ** 2 * d[1])
        energy_rhs = np.sum(q * u0 ** 2 * phi * master) + source
        c0_t = sup_master(w, t, window, epsilon) if c0 is None else c0
        majorant = c0_t * energies[i] + source

        samples.append(LedgerSample(
            t=t, energy=float(energies[i]), dE_dt=dE, time_term=float(time_term),
            dispersive_term=float(dispersive), third_term=float(third),
            fifth_term=float(fifth), source_term=float(source),
            boundary_term=float(boundary), residual=float(residual),
            energy_lhs=float(energy_lhs), energy_rhs=float(energy_rhs), majorant=float(majorant),
            c0=float(c0_t), a4_slack=a4,
        ))
    worst = max(s.relative_residual for s in samples)
    logger.info("ledger over %d samples: worst relative residual %.2e", len(samples), worst)
    return samples


def _boundary_term(field: Field, w: PiecewiseWeight, edges: np.ndarray, t: float) -> float:
    u = np.stack([spectral_interpolate(field, edges, j) for j in range(5)])
    profile, phi = _weight_at(w, edges, t)
    d = profile.ratios * phi
    flux = [boundary_flux(u[:, k], d[:5, k]) for k in range(2)]
    return float(flux[1] - flux[0])


def ledger_tolerance(spec) -> float:
    conf = lab_settings.DECAYLAB
    return conf['LEDGER_TOLERANCE_LINEAR'] if spec.is_zero else conf['LEDGER_TOLERANCE_NONLINEAR']
