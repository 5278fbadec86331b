"""
Kernel Tests

Oscillatory quadrature of K_j against analytic values, the rotated contour
and the decay envelope fits.
"""
import math

import numpy as np
import pytest
from scipy.special import gamma

from core.services.base import NumericalDefect, ValidationError
from kernel.enums import KernelMethod
from kernel.quadrature import (
    airy_kernel, kernel_at_time, kernel_at_zero, kernel_contour, kernel_direct,
    kernel_envelope, kernel_eval, phase_order, predicted_right_rate,
)
from kernel.services import KernelService, contour_agreement
from kernel.tables import CSV_COLUMNS, build_kernel_table


class TestQuadrature:
    """Test suite for point evaluation of K_j."""

    def test_value_at_zero(self):
        """Test K_2(0) = Γ(6/5) cos(π/10) / π."""
        exact = gamma(1.2) * math.cos(math.pi / 10) / math.pi
        assert kernel_at_zero(2) == pytest.approx(exact, rel=1e-15)
        assert abs(kernel_direct(0.0, 2)[0] - exact) < 1e-6

    @pytest.mark.parametrize('x', [-8.0, -3.0, -0.5, 0.0, 1.0, 3.0])
    def test_airy_case(self, x):
        """Test that j = 1 reproduces 3^{-1/3} Ai(3^{-1/3} x)."""
        assert kernel_direct(x, 1)[0] == pytest.approx(float(airy_kernel(x)), abs=1e-9)

    def test_contour_agrees_with_direct(self):
        """Test direct and rotated-contour evaluation on [0, 6]."""
        assert contour_agreement(2, xmax=6.0, points=13) < 1e-8

    def test_error_estimate_reported(self):
        """Test that the direct method returns a small error estimate."""
        value, error = kernel_direct(-10.0, 2)
        assert math.isfinite(value)
        assert 0 <= error < 1e-6

    def test_outside_validity_window(self):
        """Test that |x| beyond the validity window is a numerical defect."""
        with pytest.raises(NumericalDefect):
            kernel_direct(500.0, 2)

    def test_unsupported_order(self):
        """Test that only j = 1 and j = 2 are implemented."""
        with pytest.raises(ValidationError):
            phase_order(3)

    def test_contour_needs_nonnegative_x(self):
        """Test that the contour method rejects x < 0."""
        with pytest.raises(ValidationError):
            kernel_contour(-1.0, 2)

    def test_reverse_convention(self):
        """Test that the reversed equation has kernel K(-x)."""
        assert kernel_eval(1.5, 2, reverse=True) == kernel_direct(-1.5, 2)[0]

    def test_vectorized_shape(self):
        """Test that arrays keep their shape."""
        assert kernel_eval(np.zeros((2, 3)), 2).shape == (2, 3)

    def test_self_similarity(self):
        """Test that the kernel at t = 1 is K itself and scales as t^{-1/5}."""
        x = np.array([-2.0, 0.0, 1.0])
        np.testing.assert_allclose(kernel_at_time(x, 1.0), kernel_eval(x), rtol=1e-14)
        assert kernel_at_time(0.0, 32.0) == pytest.approx(kernel_at_zero(2) / 2.0, abs=1e-6)

    def test_nonpositive_time(self):
        """Test that t <= 0 is rejected."""
        with pytest.raises(ValidationError):
            kernel_at_time(1.0, 0.0)

    def test_envelope_bounds_kernel(self):
        """Test |K| <= envelope on the right side."""
        for x in (2.0, 4.0, 6.0):
            assert abs(kernel_contour(x, 2)[0]) <= kernel_envelope(x, 2) * (1 + 1e-9)

    def test_predicted_rates(self):
        """Test the saddle rates: 2/3^{3/2} for Airy, 4 sin(π/4)/5^{5/4} for j = 2."""
        assert predicted_right_rate(1) == pytest.approx(2.0 / 3.0 ** 1.5)
        assert predicted_right_rate(2) == pytest.approx(4.0 * math.sin(math.pi / 4) / 5.0 ** 1.25)


class TestKernelTable:
    """Test suite for tabulation."""

    def test_grid_and_methods(self):
        """Test the sample grid and per-sample method tags."""
        table = build_kernel_table(j=2, xmin=-2.0, xmax=2.0, step=0.5, method=KernelMethod.AUTO)
        assert table.x.size == 9
        assert table.method[0] == KernelMethod.DIRECT.value
        assert table.method[-1] == KernelMethod.CONTOUR.value

    def test_contour_table_needs_nonnegative_range(self):
        """Test that a contour table starting left of 0 is rejected."""
        with pytest.raises(ValidationError):
            build_kernel_table(j=2, xmin=-1.0, xmax=1.0, step=0.5, method=KernelMethod.CONTOUR)

    def test_csv_rows(self):
        """Test the CSV schema."""
        rows = build_kernel_table(j=1, xmin=0.0, xmax=1.0, step=0.5).csv_rows()
        assert len(rows) == 3
        assert tuple(rows[0]) == CSV_COLUMNS

    def test_window(self):
        """Test restriction of a table to a sub-range."""
        table = build_kernel_table(j=1, xmin=-1.0, xmax=1.0, step=0.25).window(0.0, 0.5)
        np.testing.assert_allclose(table.x, [0.0, 0.25, 0.5])


class TestKernelService:
    """Test suite for the kernel service."""

    def test_invalid_request(self):
        """Test that an invalid range fails with exit code 1."""
        result = KernelService().tabulate(j=2, xmin=1.0, xmax=0.0)
        assert result.is_fail
        assert result.exit_code == 1
        assert 'xmax' in result.errors

    def test_cross_check(self):
        """Test the K(0) and contour checks."""
        checks = KernelService().cross_check(2)
        assert checks['zero_ok'] and checks['contour_ok']

    @pytest.mark.slow
    @pytest.mark.parametrize('j', [1, 2])
    def test_envelope_exponents(self, j):
        """Test the fitted right and left exponents against n/(n-1) and (n-2)/(2(n-1))."""
        result = KernelService().tabulate(j=j, xmin=-40.0, xmax=10.0, step=0.02)
        fit = result.data.fit
        n = 2 * j + 1
        assert abs(fit.right_exponent - n / (n - 1)) <= 0.1
        assert abs(fit.left_exponent - (n - 2) / (2 * (n - 1))) <= 0.1
        assert 0.9 <= fit.diagnostics['right_table_ratio'] <= 1.0 + 1e-6
        assert result.is_ok, result.errors

    @pytest.mark.slow
    def test_fifth_order_right_exponent_window(self):
        """Test 1.15 <= p <= 1.35 for K_2."""
        fit = KernelService(context={'cross_check': False}).tabulate(j=2, xmin=-40.0, xmax=10.0).data.fit
        assert 1.15 <= fit.right_exponent <= 1.35
