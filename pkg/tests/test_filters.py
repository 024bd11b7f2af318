"""Transfer-function values, series coefficients, and contraction geometry.

Frozen expected values were computed with the defining-integral quadrature
oracle (`beta_hat_quadrature`) and cross-checked against 50-digit mpmath
quadrature before being pinned here.
"""

import math

import numpy as np
import pytest

from waveholtz import filters as flt
from waveholtz.errors import InvalidFrequencyError

# Independent oracle values for beta_hat on the negative real axis.
BETA_HAT_M2 = 0.0875349134352666
BETA_HAT_M1 = 0.0794288651751015


def lhp_samples(rng, n):
    return rng.uniform(-5.0, 0.0, n) + 1j * rng.uniform(-5.0, 5.0, n)


class TestFilterWeight:
    def test_values(self):
        assert flt.filter_weight(0.0, 1.0) == pytest.approx(0.75, abs=1e-15)
        assert flt.filter_weight(math.pi, 1.0) == pytest.approx(-1.25, abs=1e-15)

    def test_invalid_frequency(self):
        with pytest.raises(InvalidFrequencyError):
            flt.filter_weight(0.1, 0.0)
        with pytest.raises(InvalidFrequencyError):
            flt.beta(1.0, -2.0)

    def test_unit_response_quadrature(self):
        # (2/T) int_0^T (cos(w t) - 1/4) e^{i w t} dt == 1, by Gauss-Legendre
        omega = 10 * math.pi
        T = 2 * math.pi / omega
        x, w = np.polynomial.legendre.leggauss(120)
        t = 0.5 * T * (x + 1.0)
        val = (2.0 / T) * 0.5 * T * np.sum(w * flt.filter_weight(t, omega) * np.exp(1j * omega * t))
        assert val == pytest.approx(1.0, abs=1e-13)


class TestBetaHat:
    def test_special_points_exact(self):
        assert flt.beta_hat(0.0) == -0.5
        assert flt.beta_hat(1j) == 1.0
        assert flt.beta_hat(-1j) == 1.0

    def test_negative_axis_frozen_values(self):
        assert flt.beta_hat(-2.0 + 0j) == pytest.approx(BETA_HAT_M2, abs=1e-13)
        assert flt.beta_hat(-1.0 + 0j) == pytest.approx(BETA_HAT_M1, abs=1e-13)

    def test_matches_quadrature_oracle(self, rng):
        z = lhp_samples(rng, 1000)
        assert np.max(np.abs(flt.beta_hat(z) - flt.beta_hat_quadrature(z))) < 1e-10

    def test_schwarz_reflection(self, rng):
        z = lhp_samples(rng, 300)
        assert np.max(np.abs(flt.beta_hat(np.conj(z)) - np.conj(flt.beta_hat(z)))) < 1e-14

    def test_no_jump_at_series_switch(self):
        # both evaluation branches agree at identical points near the switch
        angles = np.linspace(0.0, 2 * np.pi, 41)
        for center in (0.0, 1j, -1j):
            z = center + 0.5e-3 * np.exp(1j * angles)  # series branch used here
            w = z.astype(complex)
            closed = (3 * w**2 - 1) / (4 * np.pi * w * (w**2 + 1)) * (np.exp(2 * np.pi * w) - 1)
            assert np.max(np.abs(flt.beta_hat(z) - closed)) < 1e-11

    def test_accurate_through_removable_singularities(self):
        # The function varies at first order around 0 and +-i, so compare
        # against the defining integral rather than the limit value alone.
        angles = np.linspace(0.0, 2 * np.pi, 101)
        for center in (0.0, 1j, -1j):
            ring = center + 1e-4 * np.exp(1j * angles)
            err = np.abs(flt.beta_hat(ring) - flt.beta_hat_quadrature(ring))
            assert np.max(err) < 1e-8
            drift = np.abs(flt.beta_hat(ring) - flt.beta_hat(complex(center)))
            assert np.max(drift) < math.pi * 1e-4 * 1.01  # |beta_hat'| <= pi there

    def test_decay_far_from_origin(self, rng):
        r = rng.uniform(10.0, 40.0, 400)
        phi = rng.uniform(0.5 * np.pi, 1.5 * np.pi, 400)  # left half-plane
        z = r * np.exp(1j * phi)
        assert np.max(np.abs(flt.beta_hat(z))) <= 0.75


class TestBetaScaling:
    def test_examples(self):
        omega = 10 * math.pi
        assert flt.beta(1j * omega, omega) == pytest.approx(1.0, abs=1e-14)
        assert flt.beta(0.0, omega) == pytest.approx(-0.5, abs=1e-14)
        assert flt.beta(-omega, omega) == pytest.approx(BETA_HAT_M1, abs=1e-13)

    def test_scale_invariance(self, rng):
        z = lhp_samples(rng, 50)
        for omega in (1.0, 10 * math.pi, 123.4):
            assert np.allclose(flt.beta(z * omega, omega), flt.beta_hat(z), atol=1e-12)


class TestBetaSeries:
    def test_leading_coefficients(self):
        sc = flt.beta_series(3)
        assert sc.coeffs[0] == -0.5
        assert sc.coeffs[1] == pytest.approx(-math.pi / 2, abs=1e-14)
        assert sc.coeffs[2] == pytest.approx(2.0 - math.pi**2 / 3.0, abs=1e-14)

    def test_coefficient_envelope(self):
        sc = flt.beta_series(60)
        fact = 1.0
        for n in range(61):
            if n > 0:
                fact *= n
            assert abs(sc.coeffs[n]) <= (2 * math.pi) ** n / fact

    def test_series_matches_closed_form(self):
        sc = flt.beta_series(40)
        assert abs(sc(-0.3) - flt.beta_hat(-0.3 + 0j)) < 1e-10
        ring = 0.999 * np.exp(1j * np.linspace(0.0, 2 * np.pi, 37))
        assert np.max(np.abs(sc(ring) - flt.beta_hat(ring))) < 1e-10

    def test_negative_n_max_rejected(self):
        with pytest.raises(ValueError):
            flt.beta_series(-1)


class TestParabolicGeometry:
    def test_examples(self):
        assert flt.parabolic_distance(1j) == 0.0
        assert flt.parabolic_distance(0.0) == pytest.approx(flt.ALPHA, abs=1e-15)
        assert flt.parabolic_distance(-1.0 + 1j) == pytest.approx(1.0, abs=1e-15)

    def test_constants(self):
        c = flt.FilterConstants()
        assert c.alpha == pytest.approx((2 * math.pi**2 - 3) / (12 * math.pi), abs=1e-16)
        assert 0.0 < c.delta < 1.0
        assert flt.contraction_bound(0.1) == pytest.approx(0.9)
        assert flt.contraction_bound(0.5) == pytest.approx(0.75)

    def test_contraction_bound_sampling(self, rng):
        z = rng.uniform(-6.0, 0.0, 4000) + 1j * rng.uniform(-6.0, 6.0, 4000)
        pd = flt.parabolic_distance(z)
        mag = np.abs(flt.beta_hat(z))
        for eps in (0.01, 0.05, 0.1):
            keep = pd >= eps
            assert np.any(keep)
            assert np.max(mag[keep]) <= flt.contraction_bound(eps) + 1e-12


class TestAxisBounds:
    def test_examples(self):
        b1 = flt.check_axis_bounds(1.0)
        assert b1.bound == pytest.approx(1.0) and b1.satisfied
        b0 = flt.check_axis_bounds(0.0)
        assert b0.bound == pytest.approx(0.75) and b0.satisfied
        b14 = flt.check_axis_bounds(1.4)
        assert b14.bound == pytest.approx(0.84) and b14.satisfied
        assert abs(flt.beta_hat(1.4j)) <= 0.84

    def test_dense_grid(self):
        res = flt.check_axis_bounds(np.linspace(-10.0, 10.0, 10001))
        assert bool(np.all(res.satisfied))
