"""
Decay Laboratory Tests

Quadrature, weighted norms, initial data and the four decay experiments.
"""
import math
from dataclasses import replace

import numpy as np
import pytest

from core.enums import Verdict
from core.services.base import ValidationError
from decaylab.experiments import (
    DecayConfig, difference_experiment, kato_experiment, ledger_experiment,
    linear_kato_rate, persistence_experiment,
)
from decaylab.ledger import boundary_flux, ledger_rule, sample_indices, time_derivative
from decaylab.norms import exponential_weight, log_weighted_norm, weighted_norm
from decaylab.profiles import TAPER, ProfileSpec, build_profile
from decaylab.quadrature import field_derivatives_at, spectral_interpolate, window_rule
from decaylab.reports import CSV_COLUMNS, DecayReport
from decaylab.services import DecayService
from solver.grid import Field, Grid
from solver.nonlinearity import preset


def with_preset(config: DecayConfig, name: str) -> DecayConfig:
    """Return config on the same box with a named nonlinearity and its dealiasing."""
    spec = preset(name)
    return replace(config, spec=spec, grid=Grid.for_spec(config.grid.L, config.grid.M, spec))


class TestQuadrature:
    """Test suite for window rules and interpolation."""

    def test_polynomial_exact(self):
        """Test ∫_{-1}^{2} x² dx = 3 across a breakpoint."""
        x, w = window_rule((-1.0, 2.0), breakpoints=(0.5,), panel=0.7)
        assert np.sum(w) == pytest.approx(3.0, rel=1e-13)
        assert np.sum(w * x ** 2) == pytest.approx(3.0, rel=1e-13)

    def test_graded_towards_zero(self):
        """Test that panels shrink geometrically around x = 0."""
        x, _ = window_rule((-1.0, 1.0), panel=0.5, grading=6)
        assert np.min(np.abs(x)) < 0.5 * 0.5 ** 6

    def test_empty_window(self):
        """Test that lo >= hi is rejected."""
        with pytest.raises(ValidationError):
            window_rule((1.0, 1.0))

    def test_fine_span(self):
        """Test that panels inside a fine span are no wider than its width."""
        x, w = window_rule((-2.0, 2.0), panel=1.0, nodes=4, grading=0, fine=((0.5, 0.75, 0.01),))
        assert np.sum(w) == pytest.approx(4.0, rel=1e-13)
        assert np.count_nonzero((x > 0.5) & (x < 0.75)) == 4 * 25
        assert np.count_nonzero(x < 0.0) == 4 * 2

    def test_nyquist_mode(self, grid):
        """Test that the interpolant reads the Nyquist coefficient as irfft does."""
        spectrum = np.zeros(grid.M // 2 + 1, dtype=complex)
        spectrum[3] = 40.0 - 25.0j
        spectrum[-1] = grid.M * (0.5 + 0.7j)
        field = Field.from_spectrum(grid, spectrum)
        np.testing.assert_allclose(spectral_interpolate(field, grid.x), field.values, atol=1e-12)

    def test_interpolant_matches_collocation(self, grid):
        """Test that the interpolant reproduces the field on the grid."""
        f = build_profile(grid, 'gaussian', amplitude=1.0, width=3.0)
        np.testing.assert_allclose(spectral_interpolate(f, grid.x), f.values, atol=1e-13)

    def test_interpolated_derivative(self, grid):
        """Test ∂_x of a Gaussian between grid points."""
        f = build_profile(grid, 'gaussian', amplitude=1.0, width=3.0)
        x = np.array([-2.3, 0.17, 4.9])
        exact = -2.0 * x / 9.0 * np.exp(-(x / 3.0) ** 2)
        np.testing.assert_allclose(spectral_interpolate(f, x, order=1), exact, atol=1e-11)


class TestNorms:
    """Test suite for weighted L² norms."""

    def test_unit_weight_is_l2(self, grid):
        """Test that w ≡ 1 gives ∫u² on a window holding the data."""
        f = build_profile(grid, 'gaussian', amplitude=1.0, width=3.0)
        value = weighted_norm(f, window=(-30.0, 30.0))
        assert value == pytest.approx(3.0 * math.sqrt(math.pi / 2), rel=1e-10)

    def test_zero_rate_exponential(self, grid):
        """Test that e^{0·x_+^{5/4}} is the unit weight."""
        f = build_profile(grid, 'gaussian', width=3.0)
        assert weighted_norm(f, exponential_weight(0.0)) == pytest.approx(weighted_norm(f), rel=1e-14)

    def test_monotone_in_rate(self, grid):
        """Test that a larger a gives a larger norm."""
        f = build_profile(grid, 'gaussian', width=3.0)
        assert weighted_norm(f, exponential_weight(0.5)) < weighted_norm(f, exponential_weight(1.0))

    def test_log_space(self, grid):
        """Test that a weight past e^700 is summed in log space."""
        f = build_profile(grid, 'gaussian', amplitude=1.0, width=3.0)
        weight = exponential_weight(50.0)
        assert log_weighted_norm(f, weight, (-30.0, 30.0)) > 700.0
        assert math.isinf(weighted_norm(f, weight, (-30.0, 30.0)))

    def test_zero_field(self, grid):
        """Test that log ∫0 is -inf."""
        assert log_weighted_norm(Field(grid, np.zeros(grid.M))) == -math.inf


class TestProfiles:
    """Test suite for initial data."""

    def test_bump_support(self, grid):
        """Test that the bump vanishes outside (c - w, c + w)."""
        f = build_profile(grid, 'bump', center=-5.0, width=4.0, amplitude=1.0)
        outside = np.abs(grid.x + 5.0) >= 4.0
        assert np.all(f.values[outside] == 0.0)
        assert f.values.max() == pytest.approx(1.0, abs=0.05)

    def test_packet_seeded(self, grid):
        """Test that the packet is a function of its seed."""
        one = build_profile(grid, 'packet', seed=3).values
        again = build_profile(grid, 'packet', seed=3).values
        other = build_profile(grid, 'packet', seed=4).values
        np.testing.assert_array_equal(one, again)
        assert not np.allclose(one, other)

    def test_right_cutoff(self, grid):
        """Test that the taper removes everything past cutoff + TAPER."""
        f = build_profile(grid, 'sech2', width=10.0, right_cutoff=5.0)
        assert np.all(f.values[grid.x >= 5.0 + TAPER] == 0.0)
        left = grid.x <= 5.0
        np.testing.assert_allclose(f.values[left], ProfileSpec('sech2', width=10.0).values(grid.x[left]))

    def test_scaled(self):
        """Test amplitude scaling."""
        assert ProfileSpec(amplitude=0.2).scaled(0.5).amplitude == pytest.approx(0.1)

    @pytest.mark.parametrize('params', [{'kind': 'square'}, {'width': 0.0}, {'modes': 0}])
    def test_invalid(self, params):
        """Test unknown kinds, empty width and empty packets."""
        with pytest.raises(ValidationError):
            ProfileSpec(**params)


class TestDecayConfig:
    """Test suite for experiment configs."""

    def test_dt_above_T(self, linear_config):
        """Test that dt must lie in (0, T]."""
        with pytest.raises(ValidationError) as exc:
            replace(linear_config, dt=1.0)
        assert 'dt' in exc.value.errors

    def test_delta_range(self, linear_config):
        """Test that delta must lie in (0, 1)."""
        with pytest.raises(ValidationError):
            replace(linear_config, delta=1.0)

    def test_refined_linear(self, linear_config):
        """Test that refinement doubles M and keeps dt for the linear flow."""
        fine = linear_config.refined()
        assert fine.grid.M == 2 * linear_config.grid.M
        assert fine.dt == linear_config.dt
        assert fine.cadence == linear_config.cadence
        assert not fine.refine

    def test_refined_nonlinear(self, linear_config, kdv5_spec):
        """Test that refinement shrinks dt and keeps the sample times."""
        config = replace(linear_config, spec=kdv5_spec)
        fine = config.refined()
        assert fine.dt < config.dt
        assert fine.cadence * fine.dt == pytest.approx(config.cadence * config.dt, rel=0.05)


class TestPersistence:
    """Test suite for the moving-weight persistence experiment."""

    def test_linear(self, linear_config):
        """Test W_moving <= W_frozen and a finite c*."""
        report = persistence_experiment(linear_config)
        assert report.passed
        assert report.checks['moving_below_frozen']
        assert report.constants['c_star'] >= 1.0
        assert report.a_t[0] == linear_config.a0
        assert report.a_t[-1] < linear_config.a0
        assert report.sentinel_max < 1e-10

    @pytest.mark.slow
    @pytest.mark.parametrize('name', ['kdv5', 'ivp17'])
    def test_nonlinear_refinement(self, linear_config, name):
        """Test that c* survives doubling M for small nonlinear data."""
        report = persistence_experiment(replace(with_preset(linear_config, name), refine=True))
        assert report.checks['refinement_stable']
        assert report.passed
        assert 1.0 <= report.constants['c_star'] < math.inf
        assert report.constants['c_star_change'] < 0.05

    def test_csv_rows(self, linear_config):
        """Test that unused series are written as empty cells."""
        report = persistence_experiment(linear_config)
        rows = report.csv_rows()
        assert len(rows) == len(report.times) == 11
        assert set(rows[0]) == set(CSV_COLUMNS)
        assert rows[0]['K_beta'] == ''

    def test_sentinel_invalidates(self, linear_config):
        """Test that data at the box edge make the run a defect."""
        config = replace(linear_config, profile=ProfileSpec(center=-57.0, width=2.0))
        report = persistence_experiment(config)
        assert report.defect
        assert report.verdict == Verdict.DEFECT
        assert report.notes


class TestDifference:
    """Test suite for the difference experiment."""

    def test_linear(self, linear_config):
        """Test Λ > 0 and c** bounded for a Gaussian perturbation."""
        config = replace(linear_config, perturbation=ProfileSpec(amplitude=0.01, center=-10.0, width=3.0))
        report = difference_experiment(config)
        assert report.passed
        assert report.Lambda > 0
        assert 0 < report.constants['c_2star'] < math.inf
        assert report.summary()['Lambda'] == report.Lambda

    def test_zero_perturbation(self, linear_config):
        """Test that equal data give Λ = 0 and an identically zero difference."""
        config = replace(linear_config, perturbation=ProfileSpec(amplitude=0.0))
        report = difference_experiment(config)
        assert report.Lambda == 0.0
        assert report.constants['c_2star'] == 0.0
        assert report.checks['identically_zero']


class TestKato:
    """Test suite for the Kato experiment."""

    def test_linear_rate(self):
        """Test 4β⁵."""
        assert linear_kato_rate(0.5) == pytest.approx(0.125)
        assert linear_kato_rate(0.0) == 0.0

    @pytest.mark.parametrize('beta', [0.2, 0.3, 0.5])
    def test_linear_flow(self, linear_config, beta):
        """Test that the fitted growth stays below the sharp linear rate."""
        config = replace(linear_config, beta=beta, delta=0.1)
        report = kato_experiment(config)
        assert report.checks['below_linear_rate']
        assert report.constants['gamma'] <= linear_kato_rate(beta) * 1.05 + 1e-9
        assert report.checks['saturated_below_exponential']
        assert report.passed

    def test_zero_beta(self, linear_config):
        """Test that β = 0 is the conserved L² norm."""
        report = kato_experiment(replace(linear_config, beta=0.0))
        assert abs(report.constants['gamma']) < 1e-8


@pytest.mark.slow
class TestLedger:
    """Test suite for the weighted energy ledger."""

    def test_linear_identity(self, linear_config):
        """Test that the identity closes to 1e-6 for the linear flow."""
        report = ledger_experiment(linear_config)
        assert report.constants['max_relative_residual'] < 1e-6
        assert report.checks['identity']
        assert report.checks['cauchy_schwarz_split']
        assert len(report.ledger) == len(report.times) - 2

    def test_ledger_series(self, linear_config):
        """Test that residuals are reported at interior times only."""
        report = ledger_experiment(linear_config)
        residuals = report.series()['ledger_residual']
        assert math.isnan(residuals[0]) and math.isnan(residuals[-1])
        assert np.all(np.isfinite(residuals[1:-1]))

    @pytest.mark.parametrize('name', ['kdv5', 'ivp17'])
    def test_nonlinear_identity(self, linear_config, name):
        """Test that the identity closes to 1e-4 with the source term."""
        report = ledger_experiment(with_preset(linear_config, name))
        assert report.constants['max_relative_residual'] < 1e-4
        assert report.checks['identity']
        assert any(s.source_term != 0.0 for s in report.ledger)


class TestLedgerHelpers:
    """Test suite for the ledger building blocks."""

    def test_sample_indices(self):
        """Test the stride through stored times with the last one kept."""
        assert sample_indices(201, 20) == list(range(0, 201, 20))
        assert sample_indices(10, 4) == [0, 4, 8, 9]
        assert sample_indices(3, 1) == [0, 1, 2]

    def test_fifth_term_quadrature(self, wide_grid, weight, gaussian):
        """Test ∫u²∂⁵φ_N against a halved blend panel and one integration by parts."""
        field = gaussian.build(wide_grid)
        window = (-20.0, 20.0)

        def fifth(panel):
            x, q = ledger_rule(weight, window, wide_grid.dx, blend_panel=panel)
            u = spectral_interpolate(field, x)
            return np.sum(q * u ** 2 * weight.profile(x, 0.0).derivative(5))

        x, q = ledger_rule(weight, window, wide_grid.dx)
        u = field_derivatives_at(field, x, 1)
        edges = np.array(window)
        ends = spectral_interpolate(field, edges) ** 2 * weight.profile(edges, 0.0).derivative(4)
        by_parts = ends[1] - ends[0] - np.sum(q * 2.0 * u[0] * u[1] * weight.profile(x, 0.0).derivative(4))

        assert fifth(0.005) == pytest.approx(fifth(0.0025), rel=1e-7)
        assert fifth(0.005) == pytest.approx(by_parts, rel=1e-6, abs=1e-10)

    def test_time_derivative_exact_on_quartic(self):
        """Test that the five-point stencil is exact for quartics."""
        t = np.linspace(0.0, 1.0, 11)
        values = t ** 4 - t
        assert time_derivative(t, values, 5) == pytest.approx(4 * 0.5 ** 3 - 1, abs=1e-12)

    def test_time_derivative_near_edge(self):
        """Test the three-point stencil next to the ends."""
        t = np.linspace(0.0, 1.0, 11)
        assert time_derivative(t, 3 * t, 1) == pytest.approx(3.0)

    def test_flux_derivative(self):
        """Test dG/dx against a finite difference for polynomial u and φ."""
        def jets(coeffs, x):
            poly = np.polynomial.Polynomial(coeffs)
            return [poly.deriv(j)(x) if j else poly(x) for j in range(6)]

        u_c, p_c = [0.3, -1.0, 0.5, 0.2, -0.1, 0.05], [1.0, 0.4, 0.1, -0.2, 0.03, 0.01]
        x, h = 0.7, 1e-5
        G = lambda s: boundary_flux(jets(u_c, s)[:5], jets(p_c, s)[:5])
        u, p = jets(u_c, x), jets(p_c, x)
        dG = 2 * u[0] * u[5] * p[0] + 5 * u[2] ** 2 * p[1] - 5 * u[1] ** 2 * p[3] + u[0] ** 2 * p[5]
        assert (G(x + h) - G(x - h)) / (2 * h) == pytest.approx(dG, rel=1e-7)


class TestDecayService:
    """Test suite for the decay service."""

    def test_unknown_experiment(self, linear_config):
        """Test that unknown experiments fail validation."""
        result = DecayService().run_experiment('weather', linear_config)
        assert result.is_fail
        assert result.exit_code == 1

    def test_persistence(self, linear_config):
        """Test a passing run."""
        result = DecayService().run_experiment('persistence', linear_config)
        assert result.is_ok
        assert isinstance(result.data, DecayReport)

    def test_defect_exit_code(self, linear_config):
        """Test that a sentinel breach maps to exit code 3."""
        config = replace(linear_config, profile=ProfileSpec(center=-57.0, width=2.0))
        result = DecayService().run_experiment('persistence', config)
        assert result.exit_code == 3
