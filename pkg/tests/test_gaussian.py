import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from commonbath import (DimensionlessPoint, SecondMoments, characteristic_function,
                        covariance_from_moments, default_regulator, density_exponent,
                        from_dimensionless, moments_all, rho_element, sector_variances,
                        vacuum_normalized)

MOMENTS = moments_all(from_dimensionless(DimensionlessPoint(r=0.3, A=0.4)))


def product_state_moments(M=1.0, omega=1.0, hbar=1.0):
    """Sector variances of two independent ground-state oscillators:
    <x_i^2> = hbar/(2 M omega), <p_i^2> = M hbar omega / 2, no correlations."""
    return SecondMoments(q2_xi=hbar / (M * omega), p2_xi=M * hbar * omega / 4.0,
                         p2_zeta=M * hbar * omega, q2_zeta=hbar / (4.0 * M * omega))


class TestDensityExponent:
    def test_free_cm_gives_zero_c3(self):
        exp_ = density_exponent(MOMENTS)
        assert exp_.c3 == 0.0

    def test_coefficient_values(self):
        m = SecondMoments(q2_xi=2.0, p2_xi=0.5, p2_zeta=1.5)
        exp_ = density_exponent(m, hbar=1.0)
        assert_allclose(exp_.c1, 1.0 / 16.0, rtol=1e-15)
        assert_allclose(exp_.c2, 0.25, rtol=1e-15)
        assert_allclose(exp_.c4, 1.5 / 8.0, rtol=1e-15)

    def test_finite_cm_variance(self):
        m = SecondMoments(q2_xi=1.0, p2_xi=0.25, p2_zeta=1.0, q2_zeta=2.0)
        assert_allclose(density_exponent(m).c3, 1.0 / 64.0, rtol=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            density_exponent(SecondMoments(q2_xi=-1.0, p2_xi=0.5, p2_zeta=1.0))


class TestRhoElement:
    def test_hermitian(self):
        exp_ = density_exponent(MOMENTS)
        assert_allclose(rho_element(0.3, -0.2, 1.1, 0.4, exp_),
                        rho_element(1.1, 0.4, 0.3, -0.2, exp_), rtol=1e-15)

    def test_translation_invariance(self):
        exp_ = density_exponent(MOMENTS)
        base = rho_element(0.3, -0.2, 1.1, 0.4, exp_)
        for a in (-5.0, 0.7, 12.0):
            shifted = rho_element(0.3 + a, -0.2 + a, 1.1 + a, 0.4 + a, exp_)
            assert_allclose(shifted, base, rtol=1e-12)

    def test_diagonal_depends_only_on_separation(self):
        exp_ = density_exponent(MOMENTS)
        xi = 0.8
        v1 = rho_element(xi / 2, -xi / 2, xi / 2, -xi / 2, exp_)
        v2 = rho_element(3.0 + xi, 3.0, 3.0 + xi, 3.0, exp_)
        assert_allclose(v1, v2, rtol=1e-13)

    def test_diagonal_marginal_second_moment(self):
        # numerical Gaussian-integral oracle over the relative diagonal
        exp_ = density_exponent(MOMENTS)
        sigma = math.sqrt(MOMENTS.q2_xi)
        xi = np.linspace(-12.0 * sigma, 12.0 * sigma, 8001)
        diag = rho_element(xi / 2, -xi / 2, xi / 2, -xi / 2, exp_)
        norm = np.trapezoid(diag, xi)
        second = np.trapezoid(xi**2 * diag, xi) / norm
        assert_allclose(norm, 1.0, rtol=1e-10)
        assert_allclose(second, MOMENTS.q2_xi, rtol=1e-10)


class TestCovariance:
    def test_regulator_required_for_free_cm(self):
        with pytest.raises(ValueError):
            covariance_from_moments(MOMENTS)

    def test_structure(self):
        sigma = covariance_from_moments(MOMENTS, regulator=10.0)
        assert_allclose(sigma, sigma.T, rtol=0, atol=0)
        # no q-p correlations in thermal equilibrium
        for i in (0, 2):
            for j in (1, 3):
                assert sigma[i, j] == 0.0
        # particle exchange (x1,p1)<->(x2,p2) leaves sigma invariant
        swap = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
        assert_allclose(swap @ sigma @ swap.T, sigma, rtol=0, atol=0)

    def test_uncorrelated_positions_when_a_equals_c_over_4(self):
        m = SecondMoments(q2_xi=4.0, p2_xi=0.3, p2_zeta=1.0, q2_zeta=1.0)
        sigma = covariance_from_moments(m)
        assert sigma[0, 2] == 0.0

    def test_product_state_oracle(self):
        m = product_state_moments(M=1.0, omega=1.0, hbar=1.0)
        sigma = covariance_from_moments(m)
        assert_allclose(sigma, 0.5 * np.eye(4), rtol=1e-15, atol=1e-15)

    def test_sector_round_trip(self):
        m = SecondMoments(q2_xi=0.934, p2_xi=0.21, p2_zeta=0.55, q2_zeta=3.7)
        a, b, c, d = sector_variances(covariance_from_moments(m))
        assert_allclose(a, m.q2_zeta, rtol=1e-12)
        assert_allclose(b, m.p2_zeta, rtol=1e-12)
        assert_allclose(c, m.q2_xi, rtol=1e-12)
        assert_allclose(d, m.p2_xi, rtol=1e-12)

    def test_sector_round_trip_under_regulator(self):
        # recovering c from entries a +- c/4 is limited by entry rounding,
        # ~ eps * a / c relative; assert against that floor, not better
        reg = default_regulator(MOMENTS)
        sigma = covariance_from_moments(MOMENTS, regulator=reg)
        a, b, c, d = sector_variances(sigma)
        assert_allclose(a, reg, rtol=1e-12)
        assert_allclose(b, MOMENTS.p2_zeta, rtol=1e-12)
        floor = 8.0 * np.finfo(float).eps * reg / MOMENTS.q2_xi
        assert_allclose(c, MOMENTS.q2_xi, rtol=floor)
        assert_allclose(d, MOMENTS.p2_xi, rtol=1e-12)

    def test_divergence_confined_to_a_slots(self):
        lo = covariance_from_moments(MOMENTS, regulator=1e4)
        hi = covariance_from_moments(MOMENTS, regulator=1e8)
        changed = hi - lo
        mask = np.zeros((4, 4), dtype=bool)
        mask[np.ix_((0, 2), (0, 2))] = True
        assert np.all(changed[~mask] == 0.0)
        assert np.all(changed[mask] > 0.0)


class TestCharacteristicFunction:
    # moderate regulator keeps exp(-X.sigma.X/2) representable on the grids
    SIGMA = covariance_from_moments(MOMENTS, regulator=10.0)

    def test_unity_at_origin(self):
        assert characteristic_function(np.zeros(4), self.SIGMA) == 1.0

    def test_even_and_bounded(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(50, 4)) * 0.3
        w_plus = characteristic_function(X, self.SIGMA)
        w_minus = characteristic_function(-X, self.SIGMA)
        assert_allclose(w_plus, w_minus, rtol=1e-14)
        assert np.all(w_plus <= 1.0)

    def test_log_concave_along_slice(self):
        q = np.linspace(-0.5, 0.5, 101)
        X = np.zeros((101, 4))
        X[:, 0] = q
        logw = np.log(characteristic_function(X, self.SIGMA))
        second_diff = np.diff(logw, 2)
        assert np.all(second_diff < 0.0)

    def test_vacuum_normalized_unit_diagonal(self):
        sigma = covariance_from_moments(product_state_moments(hbar=0.7), )
        assert_allclose(vacuum_normalized(sigma, hbar=0.7), np.eye(4), rtol=1e-14)


class TestFourierConsistency:
    def test_relative_sector_transform_matches_characteristic_function(self):
        """The Fourier transform of the relative-sector matrix elements must
        reproduce exp(-X.sigma_rel.X/2) on the (q_rel, p_rel) plane."""
        m = MOMENTS
        exp_ = density_exponent(m)
        hbar = 1.0
        sigma_rel = np.diag([m.q2_xi, m.p2_xi])
        s = math.sqrt(m.q2_xi)
        r = np.linspace(-14.0 * s, 14.0 * s, 6001)
        for q in (0.0, 0.4 * s, 1.1 * s):
            for p in (0.0, 0.6 / s, 1.3 / s):
                rho_slice = rho_element((r - q / 2) / 2, -(r - q / 2) / 2,
                                        (r + q / 2) / 2, -(r + q / 2) / 2, exp_)
                kernel = np.exp(-1j * p * r / hbar)
                F = np.trapezoid(rho_slice * kernel, r)
                F0 = np.trapezoid(rho_element(r / 2, -r / 2, r / 2, -r / 2, exp_), r)
                measured = (F / F0).real
                expected = characteristic_function(
                    np.array([p / hbar, q / hbar]), sigma_rel)
                assert abs(measured - expected) < 1e-6
