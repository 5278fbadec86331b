"""
Weights Tests

Decay law, cutoff, piecewise weight φ_N and the Kato weight.
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from core.services.base import ValidationError
from weights.bridge import BridgePolynomial
from weights.closed_forms import master_coefficients
from weights.cutoff import Jet, eta
from weights.kato import KatoWeight, kato_eval, kato_ratio
from weights.params import (
    DecayLaw, WeightParams, decay_a, k_of_epsilon, k_of_epsilon_exact, n0_threshold,
)
from weights.piecewise import (
    PiecewiseWeight, dominance_holds, log_phi, phi_eval, phi_eval_right, phi_time_derivative,
    weight_profile,
)


class TestDecayLaw:
    """Test suite for k(ε) and a(t)."""

    def test_kappa_at_zero_is_exact(self):
        """Test that 4 k(0) equals 11·5⁵/4⁵ in rational arithmetic."""
        assert 4 * k_of_epsilon_exact(Fraction(0)) == Fraction(11 * 5 ** 5, 4 ** 5)

    def test_float_k_matches_rational(self):
        """Test that the float k(ε) agrees with the rational one."""
        for eps in (Fraction(0), Fraction(1, 100), Fraction(1, 10)):
            assert k_of_epsilon(float(eps)) == pytest.approx(float(k_of_epsilon_exact(eps)), rel=1e-15)

    def test_k_increases_with_epsilon(self):
        """Test that k(ε) is strictly increasing."""
        values = [k_of_epsilon(eps) for eps in (0.0, 0.01, 0.1, 0.5, 0.9)]
        assert all(a < b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize('epsilon', [-0.1, 1.0, 2.0])
    def test_epsilon_out_of_range(self, epsilon):
        """Test that ε outside [0, 1) is rejected."""
        with pytest.raises(ValidationError):
            k_of_epsilon(epsilon)

    def test_initial_value(self):
        """Test that a(0) = a0."""
        assert decay_a(DecayLaw.from_epsilon(2.0, 0.1), 0.0) == 2.0

    @pytest.mark.parametrize('a0,epsilon', [(0.5, 0.0), (1.0, 0.01), (2.0, 0.1)])
    def test_closed_form_solves_ode(self, a0, epsilon):
        """Test the closed form against an integration of a' = -k a⁵ on [0, 10]."""
        law = DecayLaw.from_epsilon(a0, epsilon)
        t = np.linspace(0.0, 10.0, 41)
        sol = solve_ivp(lambda _, y: -law.k * y ** 5, (0.0, 10.0), [a0], t_eval=t,
                        method='DOP853', rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(law.a(t), sol.y[0], rtol=1e-8)

    def test_decreasing(self):
        """Test that a(t) is positive and strictly decreasing."""
        a = DecayLaw.from_epsilon(1.0).a(np.linspace(0.0, 5.0, 50))
        assert np.all(a > 0)
        assert np.all(np.diff(a) < 0)

    def test_kdv_law(self):
        """Test that the third-order law satisfies a' = -(27/8) a³."""
        law = DecayLaw.kdv(1.0)
        h = 1e-6
        numeric = (law.a(0.5 + h) - law.a(0.5 - h)) / (2 * h)
        assert numeric == pytest.approx(-27.0 / 8.0 * law.a(0.5) ** 3, rel=1e-7)
        assert law.a_prime(0.5) == pytest.approx(numeric, rel=1e-7)

    def test_negative_time(self):
        """Test that negative times are rejected."""
        with pytest.raises(ValidationError):
            DecayLaw.from_epsilon(1.0).a(-0.1)

    def test_n0_threshold(self):
        """Test the least integer above c^{4/5} a0^{-4/5}."""
        assert n0_threshold(1.0, 1.0) == 2
        assert n0_threshold(1.0, 10.0) == math.floor(10 ** 0.8) + 1

    def test_invalid_params(self):
        """Test that WeightParams reports every invalid field."""
        with pytest.raises(ValidationError) as exc:
            WeightParams(a0=-1.0, epsilon=1.5, N=0)
        assert set(exc.value.errors) == {'a0', 'epsilon', 'N'}


class TestCutoff:
    """Test suite for η and jet arithmetic."""

    def test_flat_ends(self):
        """Test that η vanishes left of 1/2 and equals 1 right of 3/4."""
        assert eta(0.4) == 0.0
        assert eta(0.8) == 1.0
        assert eta(0.5) == 0.0
        assert eta(0.75) == 1.0

    def test_midpoint(self):
        """Test the symmetry point η(5/8) = 1/2."""
        assert eta(0.625) == pytest.approx(0.5, abs=1e-15)

    def test_derivative_matches_difference(self):
        """Test ∂η against a centered difference."""
        h = 1e-6
        numeric = (eta(0.6 + h) - eta(0.6 - h)) / (2 * h)
        assert eta(0.6, 1) == pytest.approx(numeric, rel=1e-6)

    def test_vectorized(self):
        """Test that arrays give arrays in [0, 1]."""
        values = eta(np.linspace(0.0, 1.0, 101))
        assert values.shape == (101,)
        assert np.all((values >= 0) & (values <= 1))
        assert np.all(np.diff(values) >= 0)

    def test_jet_power(self):
        """Test the derivatives of x⁵ at x = 2."""
        jet = Jet.variable(2.0) ** 5
        expected = [32.0, 80.0, 160.0, 240.0, 240.0, 120.0]
        np.testing.assert_allclose([float(jet.derivative(j)) for j in range(6)], expected, rtol=1e-12)


class TestPiecewiseWeight:
    """Test suite for φ_N."""

    def test_flat_region(self, weight):
        """Test that φ_N = 1 for x <= 0."""
        assert log_phi(weight, -3.0, 0.2) == 0.0
        assert phi_eval(weight, -3.0, 0.2, 1) == 0.0

    def test_core_region(self, weight):
        """Test that φ_N = e^{a(t) x^{5/4}} on [1, N]."""
        t = 0.3
        a = weight.law.a(t)
        assert log_phi(weight, 4.0, t) == pytest.approx(a * 4.0 ** 1.25, rel=1e-14)

    def test_positive_and_monotone(self, weight):
        """Test φ_N > 0 and ∂φ_N >= 0 across every region."""
        x = np.linspace(-5.0, 40.0, 2001)
        assert np.all(phi_eval(weight, x, 0.5) > 0)
        assert np.all(phi_eval(weight, x, 0.5, 1) >= 0)

    def test_weight_profile(self, weight):
        """Test that the profile carries log φ_N and a unit zeroth ratio."""
        profile = weight_profile(weight, [4.0], 0.3)
        assert profile.log_value[0] == pytest.approx(log_phi(weight, 4.0, 0.3))
        assert profile.ratios[0, 0] == 1.0

    def test_time_monotone(self, weight):
        """Test ∂_t φ_N <= 0."""
        x = np.linspace(-5.0, 40.0, 901)
        assert np.all(phi_time_derivative(weight, x, 0.1) <= 0)

    def test_c4_matching_at_N(self, weight):
        """Test that derivatives 0..4 agree from both sides of x = N."""
        N = float(weight.N)
        for j in range(5):
            left, right = phi_eval(weight, N, 0.2, j), phi_eval_right(weight, N, 0.2, j)
            assert right == pytest.approx(left, rel=1e-9)

    def test_fifth_derivative_jumps(self, weight):
        """Test that the quartic bridge has no fifth derivative."""
        N = float(weight.N)
        assert phi_eval_right(weight, N, 0.0, 5) == 0.0
        assert phi_eval(weight, N, 0.0, 5) > 0

    def test_order_out_of_range(self, weight):
        """Test that j = 6 is rejected."""
        with pytest.raises(ValidationError):
            phi_eval(weight, 1.0, 0.0, 6)

    def test_initial_dominance_below_N(self):
        """Test φ_N(x, 0) <= e^{a0 x_+^{5/4}} left of the bridge."""
        params = WeightParams(a0=1.0, N=20)
        assert dominance_holds(params, np.linspace(-5.0, 20.0, 2501))

    def test_master_four_term_formula(self):
        """Test L/φ_N on [1, N] against c4 a⁴ + c3 a³x^{-5/4} + c2 a²x^{-5/2} + c1 a x^{-15/4}."""
        from certifier.checks import master_over_phi

        for epsilon in (0.0, 0.01, 0.1):
            w = PiecewiseWeight.build(a0=1.0, epsilon=epsilon, N=10)
            x = np.linspace(1.5, 9.5, 17)
            profile = w.profile(x, 0.25)
            values, defect = master_over_phi(profile, epsilon)
            a = profile.a
            c4, c3, c2, c1 = master_coefficients(epsilon)
            formula = c4 * a ** 4 + c3 * a ** 3 * x ** -1.25 + c2 * a ** 2 * x ** -2.5 + c1 * a * x ** -3.75
            assert not defect.any()
            np.testing.assert_allclose(values, formula, rtol=1e-8, atol=1e-10)

    @pytest.mark.parametrize('epsilon', [0.0, 0.01, 0.1])
    def test_coefficient_signs(self, epsilon):
        """Test c4 > 0, c3 < 0, c2 > 0, c1 < 0."""
        c4, c3, c2, c1 = master_coefficients(epsilon)
        assert c4 > 0 and c3 < 0 and c2 > 0 and c1 < 0


class TestBridgePolynomial:
    """Test suite for the quartic continuation."""

    def test_scaled_value_at_N(self):
        """Test that the scaled polynomial is 1 at y = 0."""
        bp = BridgePolynomial(N=10, a=0.8)
        assert bp.scaled_coefficients[0] == pytest.approx(1.0)
        assert bp.value(0.0) == pytest.approx(1.0)

    def test_invalid(self):
        """Test that a <= 0 is rejected."""
        with pytest.raises(ValidationError):
            BridgePolynomial(N=10, a=0.0)


class TestKatoWeight:
    """Test suite for φ_δ = e^{βx}/(1 + δe^{βx})."""

    def test_bounded_by_inverse_delta(self, kato_weight):
        """Test sup φ_δ <= 1/δ."""
        x = np.linspace(-100.0, 100.0, 2001)
        assert np.all(kato_eval(kato_weight, x) <= 1.0 / kato_weight.delta)

    def test_first_derivative_bounds(self, kato_weight):
        """Test 0 <= ∂φ_δ <= βφ_δ."""
        x = np.linspace(-50.0, 50.0, 1001)
        d1 = kato_eval(kato_weight, x, 1)
        assert np.all(d1 >= 0)
        assert np.all(d1 <= kato_weight.beta * kato_eval(kato_weight, x) * (1 + 1e-12))

    def test_derivative_matches_difference(self, kato_weight):
        """Test ∂²φ_δ against a centered difference of ∂φ_δ."""
        h = 1e-5
        numeric = (kato_eval(kato_weight, 2.0 + h, 1) - kato_eval(kato_weight, 2.0 - h, 1)) / (2 * h)
        assert kato_eval(kato_weight, 2.0, 2) == pytest.approx(numeric, rel=1e-6)

    def test_limit_small_delta(self):
        """Test φ_δ -> e^{βx} as δ -> 0."""
        kw = KatoWeight(beta=0.3, delta=1e-10)
        assert kato_eval(kw, 1.0) == pytest.approx(math.exp(0.3), rel=1e-8)

    def test_ratio_nonnegative(self, kato_weight):
        """Test (∂³φ_δ)²/∂φ_δ >= 0."""
        assert np.all(kato_ratio(kato_weight, np.linspace(-40.0, 40.0, 401)) >= 0)

    def test_invalid(self):
        """Test that δ outside (0, 1) is rejected."""
        with pytest.raises(ValidationError):
            KatoWeight(beta=0.3, delta=1.0)
