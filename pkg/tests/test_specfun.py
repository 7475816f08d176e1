import math

import numpy as np
import pytest

from gsqg.specfun import (EULER_GAMMA, AsymptoticParams, DispersionTable,
                          GammaPoleError, conv_constant, digamma_half_integer,
                          gamma_fn, harmonic_odd, omega_asymptotic,
                          omega_dispersion, omega_sqg, pochhammer,
                          pochhammer_ratio, theta_alpha, zeta_odd,
                          zeta_tail_constant)

SQRT_PI = 1.7724538509055159


class TestGamma:
    def test_half(self):
        assert gamma_fn(0.5) == pytest.approx(SQRT_PI, rel=1e-14)

    def test_factorial(self):
        assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)

    def test_negative_half(self):
        # recurrence: gamma(0.5) = (-0.5) * gamma(-0.5)
        assert gamma_fn(-0.5) == pytest.approx(-2.0 * SQRT_PI, rel=1e-13)

    def test_accuracy_over_range(self):
        xs = np.concatenate([np.linspace(-9.97, -0.03, 301),
                             np.linspace(0.03, 30.0, 400)])
        for x in xs:
            if abs(x - round(x)) < 1e-9 and x <= 0:
                continue
            assert gamma_fn(float(x)) == pytest.approx(math.gamma(float(x)), rel=1e-13)

    def test_pole(self):
        for x in (0.0, -1.0, -7.0):
            with pytest.raises(GammaPoleError):
                gamma_fn(x)


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(3.7, 0) == 1.0

    def test_small(self):
        assert pochhammer(2.0, 3) == 24.0

    def test_gamma_identity(self):
        # (x)_n = gamma(x + n) / gamma(x)
        assert pochhammer(0.25, 5) == pytest.approx(
            gamma_fn(5.25) / gamma_fn(0.25), rel=1e-13)

    def test_recurrences(self, rng):
        for _ in range(200):
            x = rng.uniform(-5.0, 5.0)
            n = int(rng.integers(0, 21))
            if n >= 1:
                assert pochhammer(x, n) == pytest.approx(
                    x * pochhammer(1.0 + x, n - 1), rel=1e-12, abs=1e-12)
            assert pochhammer(x, n + 1) == pytest.approx(
                (x + n) * pochhammer(x, n), rel=1e-12, abs=1e-12)

    def test_ratio_matches_direct(self):
        assert pochhammer_ratio(1.25, 1.75, 7) == pytest.approx(
            pochhammer(1.25, 7) / pochhammer(1.75, 7), rel=1e-13)


class TestConvConstant:
    def test_critical_value(self):
        assert conv_constant(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_half(self):
        expect = gamma_fn(0.25) / (2.0 ** 0.5 * gamma_fn(0.75))
        assert conv_constant(0.5) == pytest.approx(expect, rel=1e-14)

    def test_small_alpha_divergence(self):
        # gamma(alpha/2) ~ 2/alpha while the denominator tends to 2,
        # so conv_constant ~ 1/alpha near zero
        a = 1e-6
        assert conv_constant(a) * a == pytest.approx(1.0, rel=1e-3)

    def test_domain(self):
        with pytest.raises(ValueError):
            conv_constant(0.0)


class TestDispersion:
    @pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.75, 0.9])
    def test_two_forms_agree(self, alpha):
        for m in range(2, 65):
            a = omega_dispersion(alpha, m)
            b = omega_dispersion(alpha, m, form="gamma")
            assert abs(a - b) <= 1e-12 * abs(a)

    def test_euler_endpoint(self):
        assert omega_dispersion(0.0, 2) == 0.25
        assert omega_dispersion(0.0, 4) == 0.375

    def test_critical_endpoint(self):
        assert omega_dispersion(1.0, 2) == pytest.approx(2.0 / (3.0 * math.pi), rel=1e-15)
        assert omega_sqg(3) == pytest.approx(2.0 / (3.0 * math.pi) + 2.0 / (5.0 * math.pi),
                                             rel=1e-15)

    def test_monotone_in_mode(self):
        for alpha in (0.1, 0.5, 0.9, 1.0):
            vals = [omega_dispersion(alpha, m) for m in range(2, 40)]
            assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_continuity_at_endpoints(self):
        for m in range(2, 11):
            assert abs(omega_dispersion(1e-4, m) - (m - 1) / (2.0 * m)) < 1e-3
            assert abs(omega_dispersion(1.0 - 1e-4, m) - omega_sqg(m)) < 1e-3

    def test_domain(self):
        with pytest.raises(ValueError):
            omega_dispersion(1.5, 3)
        with pytest.raises(ValueError):
            omega_dispersion(0.5, 1)

    def test_table_matches_scalar(self):
        tab = DispersionTable.build(0.37, 50)
        tab.check_invariants()
        for m in (2, 17, 50):
            assert tab.values[m] == pytest.approx(omega_dispersion(0.37, m), rel=1e-14)


class TestTheta:
    def test_limit_alpha_zero(self):
        # consistent with (m-1)/(2m) -> 1/2
        assert theta_alpha(1e-8) == pytest.approx(0.5, rel=1e-6)

    def test_lower_bracket_is_m2(self):
        # the first dispersion value sits exactly at theta*(1-a)/(2-a/2)
        for a in (0.2, 0.5, 0.8):
            expect = theta_alpha(a) * (1.0 - a) / (2.0 - a / 2.0)
            assert omega_dispersion(a, 2) == pytest.approx(expect, rel=1e-13)

    def test_upper_bound_and_approach(self):
        a = 0.5
        th = theta_alpha(a)
        tab = DispersionTable.build(a, 200)
        vals = [tab.values[m] for m in range(2, 201)]
        assert all(v < th for v in vals)
        assert th - vals[-1] < th - vals[-100]
        # deficit at m = 200 sits near theta * 1.014 / sqrt(200)
        assert th - vals[-1] < 0.08 * th

    def test_domain(self):
        for a in (0.0, 1.0, -0.3):
            with pytest.raises(ValueError):
                theta_alpha(a)


class TestAsymptotics:
    def test_constant_pinned_by_gamma_identity(self):
        # (1 - a/2) exp(a*gamma + c) = gamma(2 - a/2)/gamma(1 + a/2)
        for a in (0.1, 0.5, 0.9):
            lhs = (1.0 - a / 2.0) * math.exp(a * EULER_GAMMA + zeta_tail_constant(a))
            rhs = gamma_fn(2.0 - a / 2.0) / gamma_fn(1.0 + a / 2.0)
            assert lhs == pytest.approx(rhs, rel=1e-13)

    def test_tail_constant_small_alpha(self):
        c = zeta_tail_constant(0.01)
        assert c < 1e-6
        assert c == pytest.approx(0.01 ** 3 * zeta_odd(3) / 12.0, rel=1e-4)

    def test_matches_dispersion_at_large_mode(self):
        assert abs(omega_asymptotic(0.5, 1000) - omega_dispersion(0.5, 1000)) < 5e-6

    def test_error_ratio_per_doubling(self):
        # observed decay is ~2^-2.5 per doubling, beating the O(n^(a-2)) bound
        errs = {n: abs(omega_asymptotic(0.5, n) - omega_dispersion(0.5, n))
                for n in (100, 200, 400)}
        assert errs[200] / errs[100] <= 2.0 ** -1.4
        assert errs[400] / errs[200] <= 2.0 ** -1.4

    def test_scaled_error_bounded(self):
        a = 0.5
        tab = DispersionTable.build(a, 2000)
        scaled = np.array([n ** (2.0 - a) * abs(omega_asymptotic(a, n) - tab.values[n])
                           for n in range(50, 2001)])
        assert scaled[975:].max() <= scaled[:975].max()

    def test_params_bundle(self):
        p = AsymptoticParams.for_alpha(0.5)
        assert p.theta_alpha == pytest.approx(theta_alpha(0.5))
        assert p.c_alpha >= 0.0
        assert p.euler_gamma == pytest.approx(0.5772156649015329, abs=1e-15)


class TestZeta:
    def test_known_values(self):
        from scipy.special import zeta as scipy_zeta
        for s in (3, 5, 7, 9, 15):
            assert zeta_odd(s) == pytest.approx(float(scipy_zeta(s)), rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            zeta_odd(4)


class TestDigamma:
    def test_n0(self):
        assert digamma_half_integer(0) == pytest.approx(
            -EULER_GAMMA - 2.0 * math.log(2.0), rel=1e-15)
        assert digamma_half_integer(0) == pytest.approx(-1.9635100260214235, abs=1e-12)

    def test_n1(self):
        assert digamma_half_integer(1) == pytest.approx(
            -EULER_GAMMA - 2.0 * math.log(2.0) + 2.0, rel=1e-15)

    def test_against_scipy(self):
        from scipy.special import digamma
        for n in range(0, 20):
            assert digamma_half_integer(n) == pytest.approx(
                float(digamma(n + 0.5)), rel=1e-12)

    def test_reproduces_critical_dispersion(self):
        # omega_m at alpha=1 equals -(digamma(3/2) - digamma(m+1/2))/pi
        for m in range(2, 12):
            expect = -(digamma_half_integer(1) - digamma_half_integer(m)) / math.pi
            assert omega_dispersion(1.0, m) == pytest.approx(expect, rel=1e-13)

    def test_harmonic_odd(self):
        assert harmonic_odd(1) == 0.0
        assert harmonic_odd(3) == pytest.approx(1.0 / 3.0 + 1.0 / 5.0, rel=1e-15)
