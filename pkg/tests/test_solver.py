"""
Solver Tests

Grid, nonlinearity parsing, the integrating-factor RK4 stepper, the
wraparound sentinel and checkpoints.
"""
import math

import numpy as np
import pytest

from core.services.base import NumericalDefect, ValidationError
from solver.checkpoint import read_checkpoint, write_checkpoint
from solver.enums import Preset
from solver.grid import Field, Grid
from solver.integrators import evolve, step
from solver.nonlinearity import NonlinearitySpec, Term, parse_term, parse_terms, preset
from solver.services import CONSERVATION_OBSERVERS, SolverService
from solver.stability import (
    boundary_mass_fraction, check_dealiasing, stability_components, stability_limit,
)


def _gaussian(grid, amplitude=0.1, width=3.0, center=0.0):
    return Field.from_function(grid, lambda x: amplitude * np.exp(-((x - center) / width) ** 2))


class TestGrid:
    """Test suite for the collocation grid."""

    def test_points_and_wavenumbers(self, grid):
        """Test x on [-L, L) and k = π/L · (0..M/2)."""
        assert grid.x[0] == -grid.L
        assert grid.x[-1] == pytest.approx(grid.L - grid.dx)
        assert grid.k.size == grid.M // 2 + 1
        assert grid.k[1] == pytest.approx(np.pi / grid.L)

    def test_nyquist_carries_no_derivative(self, grid):
        """Test that the Nyquist entry of the derivative wavenumbers is zero."""
        assert grid.derivative_k[-1] == 0.0
        assert grid.symbol[-1] == 0.0

    def test_dealias_mask(self, grid):
        """Test that two thirds of the nonnegative modes survive."""
        assert grid.dealias_mask.sum() == math.ceil(2.0 / 3.0 * (grid.M // 2))

    @pytest.mark.parametrize('M', [100, 4, 0])
    def test_invalid_size(self, M):
        """Test that M must be a power of two >= 8."""
        with pytest.raises(ValidationError) as exc:
            Grid(L=10.0, M=M)
        assert 'M' in exc.value.errors

    def test_invalid_length(self):
        """Test that L must be positive."""
        with pytest.raises(ValidationError):
            Grid(L=0.0, M=64)

    def test_refined(self, grid):
        """Test that refinement doubles M at fixed L."""
        fine = grid.refined()
        assert (fine.L, fine.M) == (grid.L, 2 * grid.M)

    def test_for_spec_dealiasing(self, zero_spec, kdv5_spec):
        """Test 1/2 for cubic products and the 2/3 default otherwise."""
        assert Grid.for_spec(40.0, 256, kdv5_spec).dealias_fraction == 0.5
        assert Grid.for_spec(40.0, 256, preset('benney1')).dealias_fraction == pytest.approx(2.0 / 3.0)
        assert Grid.for_spec(40.0, 256, zero_spec).dealias_fraction == pytest.approx(2.0 / 3.0)
        assert check_dealiasing(Grid.for_spec(40.0, 256, kdv5_spec), kdv5_spec)


class TestField:
    """Test suite for sampled fields."""

    def test_spectral_derivatives(self):
        """Test ∂_x^j sin(3x) on [-π, π)."""
        grid = Grid(L=np.pi, M=64)
        f = Field.from_function(grid, lambda x: np.sin(3 * x))
        x = grid.x
        # round-off grows with the amplitude 3^j
        np.testing.assert_allclose(f.derivative(1), 3 * np.cos(3 * x), atol=3 * 1e-11)
        np.testing.assert_allclose(f.derivative(3), -27 * np.cos(3 * x), atol=27 * 1e-11)
        np.testing.assert_allclose(f.derivative(5), 243 * np.cos(3 * x), atol=243 * 1e-10)

    def test_mass_and_l2(self, grid):
        """Test ∫u and ∫u² of a Gaussian."""
        f = _gaussian(grid, amplitude=1.0, width=3.0)
        assert f.mass() == pytest.approx(3.0 * math.sqrt(math.pi), rel=1e-12)
        assert f.l2_squared() == pytest.approx(3.0 * math.sqrt(math.pi / 2), rel=1e-12)

    def test_shape_mismatch(self, grid):
        """Test that values must match the grid."""
        with pytest.raises(ValidationError):
            Field(grid, np.zeros(grid.M + 1))

    def test_not_finite(self, grid):
        """Test that NaN values are a numerical defect."""
        values = np.zeros(grid.M)
        values[3] = np.nan
        with pytest.raises(NumericalDefect):
            Field(grid, values).check_finite()


class TestNonlinearity:
    """Test suite for multi-index terms and presets."""

    def test_parse_rational_coefficient(self):
        """Test '-3/2 u^2 ux'."""
        assert parse_term('-3/2 u^2 ux') == Term(-1.5, 2, 1, 0, False)

    def test_parse_third_derivative(self):
        """Test that a uxxx factor puts the term into Q0."""
        term = parse_term('u uxxx')
        assert term.third and term.coeff == 1.0 and term.p == 1

    def test_parse_list(self):
        """Test ';'-separated terms."""
        assert len(parse_terms('10 u uxxx; 20 ux uxx; -30 u^2 ux')) == 3

    @pytest.mark.parametrize('text', ['v ux', 'u uxxx uxxx', '3 ux', 'uxxx', '1/0 u ux', ''])
    def test_invalid_terms(self, text):
        """Test unknown factors, repeated uxxx, low degrees and bad coefficients."""
        with pytest.raises(ValidationError):
            parse_term(text)

    def test_kdv5_preset(self, kdv5_spec):
        """Test the kdv5 coefficients and degree."""
        assert kdv5_spec.name == Preset.KDV5.value
        assert len(kdv5_spec.q0_terms) == 1 and len(kdv5_spec.q1_terms) == 2
        assert kdv5_spec.degree == 3
        assert kdv5_spec.required_dealias_fraction == pytest.approx(0.5)

    def test_custom_coefficients(self):
        """Test preset coefficients passed as keywords."""
        spec = preset('ivp17', b1=2.0, b2=0.0, b3=-1.0)
        assert [t.coeff for t in spec.terms] == [2.0, -1.0]

    def test_d2d3(self):
        """Test P = c uxx uxxx."""
        spec = preset('d2d3', c=0.5)
        assert spec.terms == (Term(0.5, 0, 0, 1, True),)

    def test_unknown_preset(self):
        """Test that unknown names are rejected."""
        with pytest.raises(ValidationError):
            preset('kdv7')

    def test_evaluation(self, grid):
        """Test that kdv5 evaluates to 10uu₃ + 20u₁u₂ - 30u²u₁."""
        u, ux, uxx, uxxx = (np.full(3, v) for v in (1.0, 2.0, 3.0, 4.0))
        np.testing.assert_allclose(preset('kdv5')(u, ux, uxx, uxxx), 10 * 4 + 20 * 6 - 30 * 2)

    def test_zero(self, zero_spec):
        """Test the linear flow."""
        assert zero_spec.is_zero
        assert zero_spec.degree == 0


class TestStability:
    """Test suite for the step recommendation and sentinel."""

    def test_linear_limited_by_accuracy(self, grid, zero_spec):
        """Test that the linear flow is limited by accuracy only."""
        components = stability_components(grid, zero_spec)
        assert math.isinf(components.dispersive) and math.isinf(components.advective)
        assert stability_limit(grid, zero_spec) == components.accuracy

    def test_nonlinear_limit(self, grid, kdv5_spec):
        """Test that larger data tightens the advective constraint."""
        strong = stability_components(grid, kdv5_spec, 1.0)
        weak = stability_components(grid, kdv5_spec, 0.01)
        assert strong.advective < weak.advective
        assert strong.dispersive == weak.dispersive
        assert stability_limit(grid, kdv5_spec, 1.0) == min(strong.dispersive, strong.advective)

    def test_dealiasing_warning(self, grid, kdv5_spec):
        """Test that 2/3 is looser than the 1/2 a cubic product requires."""
        assert not check_dealiasing(grid, kdv5_spec)
        assert check_dealiasing(Grid(L=40.0, M=256, dealias_fraction=0.5), kdv5_spec)

    def test_sentinel(self, grid):
        """Test the share of ∫u² near the box edge."""
        assert boundary_mass_fraction(_gaussian(grid)) < 1e-30
        assert boundary_mass_fraction(_gaussian(grid, center=-38.0)) > 0.1


class TestIntegrators:
    """Test suite for the Lawson RK4 stepper."""

    def test_linear_single_mode_exact(self, zero_spec):
        """Test cos(3x) -> cos(3x + 243t) to 1e-12 over unit time."""
        grid = Grid(L=np.pi, M=64)
        f0 = Field.from_function(grid, lambda x: np.cos(3 * x))
        trajectory = evolve(f0, zero_spec, 1.0, 0.01)
        exact = np.cos(3 * grid.x + 243.0)
        assert np.max(np.abs(trajectory.final.values - exact)) < 1e-12

    def test_step_rejects_nonpositive_dt(self, grid, zero_spec):
        """Test that dt <= 0 is rejected."""
        with pytest.raises(ValidationError):
            step(_gaussian(grid), zero_spec, 0.0)

    def test_step_count_lands_on_T(self, grid, zero_spec):
        """Test that dt is shortened so the last sample is at T."""
        trajectory = evolve(_gaussian(grid), zero_spec, 0.1, 0.03, cadence=2)
        assert trajectory.steps == 4
        assert trajectory.dt == pytest.approx(0.025)
        assert trajectory.times[-1] == pytest.approx(0.1)
        assert len(trajectory.times) == 3

    def test_richardson_order(self, kdv5_spec):
        """Test fourth order in dt on kdv5."""
        grid = Grid(L=20.0, M=32, dealias_fraction=0.5)
        f0 = _gaussian(grid, amplitude=0.3, width=3.0)
        finals = [evolve(f0, kdv5_spec, 0.4, dt).final.values for dt in (0.01, 0.005, 0.0025)]
        coarse = np.max(np.abs(finals[0] - finals[1]))
        fine = np.max(np.abs(finals[1] - finals[2]))
        assert math.log2(coarse / fine) >= 3.8

    def test_blow_up_is_a_defect(self, grid, kdv5_spec):
        """Test that a wildly unstable step raises NumericalDefect."""
        f0 = _gaussian(grid, amplitude=50.0, width=0.5)
        with pytest.raises(NumericalDefect):
            evolve(f0, kdv5_spec, 5.0, 0.5, keep=False)

    def test_observers(self, grid, zero_spec):
        """Test that observers are sampled at every stored time."""
        trajectory = evolve(_gaussian(grid), zero_spec, 0.05, 0.01, observers=CONSERVATION_OBSERVERS)
        assert len(trajectory.series('mass')) == len(trajectory.times) == 6
        assert trajectory.drift('mass') < 1e-14
        assert trajectory.drift('l2') < 1e-14

    @pytest.mark.slow
    def test_kdv5_conservation(self, kdv5_spec):
        """Test mass and L² drift below 1e-8 over T = 1 at L = 100, M = 4096."""
        grid = Grid.for_spec(100.0, 4096, kdv5_spec)
        assert grid.dealias_fraction == 0.5
        f0 = _gaussian(grid, amplitude=0.1, width=3.0)
        dt = stability_components(grid, kdv5_spec, 0.1).advective
        trajectory = evolve(f0, kdv5_spec, 1.0, dt, observers=CONSERVATION_OBSERVERS,
                            cadence=1000, keep=False)
        assert trajectory.drift('mass') < 1e-8
        assert trajectory.drift('l2') < 1e-8


class TestCheckpoint:
    """Test suite for checkpoints."""

    @pytest.mark.parametrize('name', ['state.csv', 'state.npz'])
    def test_write_and_read(self, tmp_path, grid, kdv5_spec, name):
        """Test that a checkpoint restores grid, time and values."""
        f = _gaussian(grid)
        f.t = 0.25
        path = write_checkpoint(tmp_path / name, f, kdv5_spec)
        restored, header = read_checkpoint(path)
        assert restored.grid == grid
        assert restored.t == 0.25
        np.testing.assert_array_equal(restored.values, f.values)
        assert header['preset'] == 'kdv5'

    def test_missing_file(self, tmp_path):
        """Test that a missing checkpoint is a validation error."""
        with pytest.raises(ValidationError):
            read_checkpoint(tmp_path / 'nothing.csv')


class TestSolverService:
    """Test suite for the solve service."""

    def test_solve_writes_checkpoint(self, wide_grid, zero_spec, tmp_path):
        """Test a clean linear solve and its checkpoint."""
        path = tmp_path / 'final.csv'
        result = SolverService(context={'cadence': 10}).solve(_gaussian(wide_grid), zero_spec, 0.1, 0.01,
                                                              checkpoint=path)
        assert result.is_ok
        assert path.exists()
        assert result.data.times[-1] == pytest.approx(0.1)

    def test_sentinel_breach(self, grid, zero_spec):
        """Test that data at the box edge fails with exit code 3."""
        result = SolverService().solve(_gaussian(grid, center=-38.0), zero_spec, 0.01, 0.01)
        assert result.is_fail
        assert result.exit_code == 3
