"""Special-function kernel tests, anchored to the independent oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thzgeo import specfun
from thzgeo.errors import DomainError, OverflowRangeError, PoleError

import oracles

# Frozen from oracles.e1_series / oracles.en_recurrence (see test_oracle_freeze).
E1_AT_1 = 0.21938393439552029
E2_AT_1 = 0.14849550677592205
E3_AT_1 = 0.10969196719776013


def test_oracle_freeze():
    assert oracles.e1_series(1.0) == pytest.approx(E1_AT_1, abs=1e-15)
    assert oracles.en_recurrence(2, 1.0) == pytest.approx(E2_AT_1, abs=1e-15)
    assert oracles.en_recurrence(3, 1.0) == pytest.approx(E3_AT_1, abs=1e-15)


class TestExpIntegral:
    def test_e1_anchor(self):
        assert specfun.exp_integral_en(1, 1.0) == pytest.approx(E1_AT_1, abs=1e-8)

    def test_large_argument_asymptotic(self):
        # E_2(50) ~ e^-50 / 50 to within a few percent
        approx = math.exp(-50.0) / 50.0
        assert specfun.exp_integral_en(2, 50.0) == pytest.approx(approx, rel=0.03)

    def test_recurrence_anchor(self):
        assert specfun.exp_integral_en(2, 1.0) == pytest.approx(E2_AT_1, abs=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
    @pytest.mark.parametrize("x", [0.05, 0.3, 0.999, 1.001, 4.0])
    def test_matches_series_recurrence_oracle(self, n, x):
        assert specfun.exp_integral_en(n, x) == pytest.approx(
            oracles.en_recurrence(n, x), rel=1e-10
        )

    @pytest.mark.parametrize("n", [1, 2, 7])
    @pytest.mark.parametrize("x", [8.0, 30.0])
    def test_matches_quadrature_oracle(self, n, x):
        assert specfun.exp_integral_en(n, x) == pytest.approx(
            oracles.en_quadrature(n, x), rel=1e-10
        )

    def test_vectorized_matches_scalar(self):
        xs = np.geomspace(0.01, 40.0, 17)
        vec = specfun.exp_integral_en(3, xs)
        scal = np.array([specfun.exp_integral_en(3, float(x)) for x in xs])
        np.testing.assert_allclose(vec, scal, rtol=1e-14)

    def test_monotone_in_n_and_x(self):
        xs = np.geomspace(0.05, 20.0, 25)
        values = {n: specfun.exp_integral_en(n, xs) for n in range(1, 7)}
        for n in range(1, 6):
            assert np.all(values[n + 1] < values[n])
        for n, v in values.items():
            assert np.all(np.diff(v) < 0.0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            specfun.exp_integral_en(0, 1.0)
        with pytest.raises(DomainError):
            specfun.exp_integral_en(1, 0.0)
        with pytest.raises(DomainError):
            specfun.exp_integral_en(1, -2.0)


class TestIncompleteGamma:
    def test_l1_reduces_to_e1(self):
        assert specfun.upper_inc_gamma_2m2l(1, 1.0) == pytest.approx(E1_AT_1, abs=1e-10)

    def test_l2_anchor(self):
        # Gamma(-2, 1) = E_3(1)
        assert specfun.upper_inc_gamma_2m2l(2, 1.0) == pytest.approx(E3_AT_1, abs=1e-10)

    @pytest.mark.parametrize("l", range(1, 7))
    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_recurrence_closure(self, l, x):
        # Gamma(a+1, x) = a Gamma(a, x) + x^a e^-x with a = 2 - 2l
        a = 2.0 - 2.0 * l
        gamma_a = specfun.upper_inc_gamma_2m2l(l, x)
        # Gamma(3-2l, x) = x^{3-2l} E_{2l-2}(x) for l >= 2, and for l = 1 it is
        # Gamma(1, x) = e^-x exactly.
        if l == 1:
            gamma_a_plus_1 = math.exp(-x)
        else:
            gamma_a_plus_1 = x ** (3 - 2 * l) * specfun.exp_integral_en(2 * l - 2, x)
        rhs = a * gamma_a + x**a * math.exp(-x)
        assert gamma_a_plus_1 == pytest.approx(rhs, rel=1e-9)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            specfun.upper_inc_gamma_2m2l(1, 0.0)
        with pytest.raises(DomainError):
            specfun.upper_inc_gamma_2m2l(0, 1.0)


class TestParabolicCylinder:
    def test_gaussian_anchor(self):
        assert specfun.parabolic_cylinder_Dneg(1.0, 0.0) == pytest.approx(
            math.sqrt(math.pi / 2.0), abs=1e-10
        )

    @pytest.mark.parametrize("nu", [0.5, 1.0, 2.0, 3.5])
    def test_zero_argument_closed_form(self, nu):
        # D_{-nu}(0) = sqrt(pi) / (2^{b/2 + 1/4} Gamma(3/4 + b/2)) with b = nu - 1/2
        b = nu - 0.5
        closed = math.sqrt(math.pi) / (2.0 ** (b / 2.0 + 0.25) * math.gamma(0.75 + b / 2.0))
        assert specfun.parabolic_cylinder_Dneg(nu, 0.0) == pytest.approx(closed, rel=1e-8)

    @pytest.mark.parametrize(
        "nu,z",
        [(0.5, 1.0), (0.5, -2.0), (1.7, 0.3), (3.0, -5.0), (2.4, 8.0)],
    )
    def test_matches_trapezoid_oracle(self, nu, z):
        assert specfun.parabolic_cylinder_Dneg(nu, z) == pytest.approx(
            oracles.pcf_trapezoid(nu, z), rel=1e-8
        )

    @settings(max_examples=40, deadline=None)
    @given(
        nu=st.floats(min_value=0.05, max_value=20.0),
        z=st.floats(min_value=-40.0, max_value=40.0),
    )
    def test_positive(self, nu, z):
        assert specfun.parabolic_cylinder_Dneg(nu, z) > 0.0

    def test_overflow_guard(self):
        with pytest.raises(OverflowRangeError):
            specfun.parabolic_cylinder_Dneg(1.0, -80.0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            specfun.parabolic_cylinder_Dneg(0.0, 1.0)
        with pytest.raises(DomainError):
            specfun.parabolic_cylinder_Dneg(-1.0, 1.0)


class TestHypergeomZ:
    def test_small_tau_limit(self):
        # 2F1[...; 0] = 1, so Z ~ 2 tau / (alpha - 2)
        assert specfun.hypergeom_Z(1e-6, 4.0) == pytest.approx(1e-6, abs=1e-9)

    def test_arctan_anchor(self):
        assert specfun.hypergeom_Z(1.0, 4.0) == pytest.approx(math.pi / 4.0, abs=1e-9)

    def test_large_tau_matches_riemann_oracle(self):
        assert specfun.hypergeom_Z(1023.0, 2.5) == pytest.approx(
            oracles.z_riemann(1023.0, 2.5), rel=1e-6
        )

    @pytest.mark.parametrize("tau", [0.1, 0.5, 0.9])
    @pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0])
    def test_matches_series_cross_check(self, tau, alpha):
        series = (
            2.0 * tau / (alpha - 2.0)
            * oracles.hyp2f1_series(1.0, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha, -tau)
        )
        assert specfun.hypergeom_Z(tau, alpha) == pytest.approx(series, rel=1e-8)

    def test_monotone_in_tau_and_alpha(self):
        taus = np.geomspace(0.01, 100.0, 12)
        z_tau = [specfun.hypergeom_Z(float(t), 3.0) for t in taus]
        assert all(b > a for a, b in zip(z_tau, z_tau[1:]))
        alphas = np.linspace(2.2, 6.0, 12)
        z_alpha = [specfun.hypergeom_Z(2.0, float(a)) for a in alphas]
        assert all(b < a for a, b in zip(z_alpha, z_alpha[1:]))

    def test_domain_error(self):
        with pytest.raises(DomainError):
            specfun.hypergeom_Z(1.0, 2.0)
        with pytest.raises(DomainError):
            specfun.hypergeom_Z(-1.0, 3.0)


class TestGamma:
    def test_half(self):
        assert specfun.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_factorial(self):
        assert specfun.gamma_fn(5.0) == 24.0

    @pytest.mark.parametrize("x", [0.3, 1.2, 3.7, 11.25, -0.5, -2.5])
    def test_matches_lanczos_oracle(self, x):
        assert specfun.gamma_fn(x) == pytest.approx(oracles.gamma_lanczos(x), rel=1e-10)

    def test_poles(self):
        for x in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                specfun.gamma_fn(x)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        specfun.QuadratureSpec(abs_tol=0.0)
    with pytest.raises(DomainError):
        specfun.QuadratureSpec(rel_tol=-1.0)
    with pytest.raises(DomainError):
        specfun.QuadratureSpec(max_subdivisions=0)
