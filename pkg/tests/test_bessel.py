"""log-gamma and modified Bessel functions against high-precision oracles."""
import math

import mpmath
import numpy as np
import pytest

from spinwhittaker.bessel import bessel_I, bessel_K, bessel_K_scaled, log_gamma
from spinwhittaker.errors import PoleError

mpmath.mp.dps = 50


def mp_c(z):
    return complex(z.real, z.imag) if isinstance(z, mpmath.mpc) else complex(z)


class TestLogGamma:
    def test_gamma_one(self):
        assert abs(log_gamma(1.0)) < 1e-15

    def test_gamma_half(self):
        assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 5e-15

    def test_complex_against_mpmath(self):
        for z in [5.5 + 2j, -3.2 + 1j, 0.1 - 7j, 40 + 40j, 99.5 + 0.5j]:
            ref = mp_c(mpmath.loggamma(z))
            got = log_gamma(z)
            assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref)), z

    def test_pole_signalled(self):
        for z in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                log_gamma(z)


class TestBesselK:
    def test_half_integer_closed_form(self):
        for x in (0.3, 1.0, 7.5):
            expect = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
            assert abs(bessel_K(0.5, x) - expect) < 1e-12 * expect

    def test_even_in_order(self):
        for nu in (0.3 + 0.7j, 2.5, 5 - 1j):
            for x in (0.5, 3.0):
                a, b = bessel_K(nu, x), bessel_K(-nu, x)
                assert abs(a - b) < 1e-12 * abs(a)

    def test_against_mpmath_grid(self):
        for nu in (0.0, 1.0, 3.7, 12.0, 35.0, 1.5 + 2j, 20 + 1j, 49.5):
            for x in (1e-3, 0.05, 0.7, 5.0, 50.0):
                ref = mp_c(mpmath.besselk(nu, x))
                got = bessel_K(nu, x)
                assert abs(got - ref) <= 1e-11 * abs(ref), (nu, x)

    def test_scaled_variant(self):
        got = bessel_K_scaled(2.0, 300.0)
        ref = mp_c(mpmath.besselk(2, 300) * mpmath.e**300)
        assert abs(got - ref) < 1e-10 * abs(ref)

    def test_wronskian(self):
        nu, x = 0.3, 2.0
        Kp = -(bessel_K(nu - 1, x) + bessel_K(nu + 1, x)) / 2
        Ip = (bessel_I(nu - 1, x) + bessel_I(nu + 1, x)) / 2
        w = bessel_I(nu, x) * Kp - Ip * bessel_K(nu, x)
        assert abs(w + 1 / x) < 1e-11 / x

    def test_dnu_against_finite_difference(self):
        for nu in (0.0, 2.0, 3.3, 1 + 1j):
            for x in (0.6, 4.0):
                h = 1e-5
                fd = (bessel_K(nu + h, x) - bessel_K(nu - h, x)) / (2 * h)
                got = bessel_K(nu, x, dnu=1)
                assert abs(got - fd) < 1e-7 * max(1.0, abs(fd)), (nu, x)

    def test_array_orders(self):
        nus = np.array([0.5, 1.5, 2.5 + 1j])
        got = bessel_K(nus, 2.0)
        for i, nu in enumerate(nus):
            assert abs(got[i] - bessel_K(complex(nu), 2.0)) < 1e-13 * abs(got[i])


class TestBesselI:
    def test_small_argument_limit(self):
        assert abs(bessel_I(0.0, 1e-8) - 1.0) < 1e-12

    def test_recurrence(self):
        for nu in (0.7, 3.0, 2 - 1j):
            for x in (0.5, 4.0, 20.0):
                lhs = bessel_I(nu - 1, x) - bessel_I(nu + 1, x)
                rhs = (2 * nu / x) * bessel_I(nu, x)
                assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs), 1e-30)

    def test_negative_integer_order_limit(self):
        for n in (1, 2, 5):
            for x in (0.8, 3.0):
                assert abs(bessel_I(-n, x) - bessel_I(n, x)) < 1e-12 * abs(bessel_I(n, x))

    def test_against_mpmath(self):
        for nu in (0.0, 2.5, -3.5, 17.0, 1.5 + 2j, 45.0):
            for x in (0.01, 0.9, 8.0, 30.0):
                ref = mp_c(mpmath.besseli(nu, x))
                got = bessel_I(nu, x)
                assert abs(got - ref) <= 1e-11 * max(abs(ref), 1e-300), (nu, x)

    def test_k_from_i_pair(self):
        for nu in (0.3, 2.2, 0.5 + 0.5j):
            for x in (0.7, 5.0):
                k_from_i = (
                    math.pi / 2 * (bessel_I(-nu, x) - bessel_I(nu, x)) / np.sin(nu * np.pi)
                )
                assert abs(k_from_i - bessel_K(nu, x)) < 1e-9 * abs(bessel_K(nu, x))

    def test_dnu_against_finite_difference(self):
        for nu in (0.4, 2.0, -1.0):
            for x in (0.6, 3.0):
                h = 1e-5
                fd = (bessel_I(nu + h, x) - bessel_I(nu - h, x)) / (2 * h)
                got = bessel_I(nu, x, dnu=1)
                assert abs(got - fd) < 1e-6 * max(1.0, abs(fd)), (nu, x)
