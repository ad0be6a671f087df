import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import bessel_i_series, struve_l0_series
from randflight.errors import DomainError
from randflight.special_functions import (
    ScaledValue,
    bessel_i,
    bessel_i_scaled,
    bessel_i_scaled_sequence,
    log_bessel_i,
    struve_l0_scaled,
    struve_l0_scaled_bessel_sum,
)

# exp(-1) I0(1) from 30 terms of the series at 50 digits
I0_SCALED_AT_1 = 0.46575960759364043
# exp(-1) L0(1) from the power series at 50 digits
L0_SCALED_AT_1 = 0.26128386633865613


def rel(a, b):
    return abs(a - b) / abs(b)


class TestBesselScaled:
    def test_origin(self):
        assert bessel_i_scaled(0, 0.0) == 1.0
        assert bessel_i_scaled(1, 0.0) == 0.0

    def test_series_oracle_at_one(self):
        assert rel(bessel_i_scaled(0, 1.0), I0_SCALED_AT_1) <= 1e-12

    def test_leading_asymptotic(self):
        z = 1e4
        assert rel(bessel_i_scaled(0, z), 1 / math.sqrt(2 * math.pi * z)) <= 1e-4

    @pytest.mark.parametrize("nu", [0, 1, 2, 3, 5, 11])
    @pytest.mark.parametrize("z", [1e-6, 0.3, 1.0, 7.5, 24.99, 25.0, 25.01, 40.0, 123.4, 700.0, 2000.0])
    def test_against_extended_series(self, nu, z):
        expected = float(bessel_i_series(nu, z) * mp.exp(-mp.mpf(z)))
        assert rel(bessel_i_scaled(nu, z), expected) <= 1e-12

    def test_large_order_falls_back(self):
        # Hankel expansion is useless for nu^2 >> z; result must still be right
        expected = float(bessel_i_series(40, 30.0) * mp.exp(-30))
        assert rel(bessel_i_scaled(40, 30.0), expected) <= 1e-12

    def test_ranges(self):
        z = np.linspace(0, 3000, 301)
        i0 = bessel_i_scaled(0, z)
        i1 = bessel_i_scaled(1, z)
        assert np.all((i0 > 0) & (i0 <= 1))
        assert np.all((i1 >= 0) & (i1 < 1))

    def test_vector_matches_scalar(self):
        z = np.array([0.0, 0.5, 24.0, 26.0, 1000.0])
        vec = bessel_i_scaled(1, z)
        assert vec.shape == z.shape
        assert list(vec) == [bessel_i_scaled(1, float(v)) for v in z]

    @pytest.mark.parametrize("nu, z", [(0, -1.0), (-1, 1.0), (1.5, 1.0), (0, float("nan"))])
    def test_domain(self, nu, z):
        with pytest.raises(DomainError):
            bessel_i_scaled(nu, z)

    @pytest.mark.parametrize("nu", [0, 1, 3])
    @pytest.mark.parametrize("z", [5000.0, 2e4, 1e6])
    def test_approaches_leading_term(self, nu, z):
        assert abs(bessel_i_scaled(nu, z) * math.sqrt(2 * math.pi * z) - 1) < 0.01

    @pytest.mark.parametrize("nu", [1, 2, 5])
    @pytest.mark.parametrize("z", [0.5, 5.0, 50.0, 500.0])
    def test_recurrence(self, nu, z):
        lhs = bessel_i_scaled(nu - 1, z) - bessel_i_scaled(nu + 1, z)
        rhs = 2 * nu / z * bessel_i_scaled(nu, z)
        assert rel(lhs, rhs) <= 1e-10

    @pytest.mark.parametrize("z", [1.0, 10.0, 100.0])
    def test_derivative_of_i0_is_i1(self, z):
        h = 1e-5 * z
        # d/dz [e^z * s(z)] with s the scaled function
        up = math.exp(h) * bessel_i_scaled(0, z + h)
        down = math.exp(-h) * bessel_i_scaled(0, z - h)
        deriv_scaled = (up - down) / (2 * h)
        assert rel(deriv_scaled, bessel_i_scaled(1, z)) <= 1e-6


class TestLogBessel:
    def test_values(self):
        assert log_bessel_i(0, 0.0) == 0.0
        assert log_bessel_i(1, 0.0) == -math.inf

    def test_identity(self):
        z = 100.0
        assert log_bessel_i(0, z) == pytest.approx(z + math.log(bessel_i_scaled(0, z)), rel=1e-15)

    @given(st.floats(min_value=0.0, max_value=3000.0))
    @settings(max_examples=60, deadline=None)
    def test_roundtrip(self, z):
        assert rel(math.exp(log_bessel_i(0, z) - z), bessel_i_scaled(0, z)) <= 1e-12

    def test_scaled_value(self):
        v = bessel_i(0, 1000.0)
        assert isinstance(v, ScaledValue)
        assert v.scale_exponent == 1000.0
        assert v.log() == pytest.approx(log_bessel_i(0, 1000.0), rel=1e-15)
        with pytest.raises(DomainError):
            ScaledValue(-1.0, 0.0)


class TestStruve:
    def test_origin(self):
        assert struve_l0_scaled(0.0) == 0.0

    def test_frozen_value(self):
        assert rel(struve_l0_scaled(1.0), L0_SCALED_AT_1) <= 1e-12
        assert rel(struve_l0_scaled_bessel_sum(1.0), L0_SCALED_AT_1) <= 1e-12

    @pytest.mark.parametrize("z", [1e-3, 0.1, 1.0, 3.0, 10.0, 24.99, 25.01, 33.0, 60.0, 250.0, 2000.0])
    def test_against_extended_series(self, z):
        expected = float(struve_l0_series(z) * mp.exp(-mp.mpf(z)))
        assert rel(struve_l0_scaled(z), expected) <= 1e-10

    @pytest.mark.parametrize("z", [0.1, 1.0, 10.0, 100.0])
    def test_two_representations(self, z):
        assert rel(struve_l0_scaled(z), struve_l0_scaled_bessel_sum(z)) <= 1e-8

    @pytest.mark.parametrize("z", [1.0, 2.5, 20.0, 26.0, 75.0, 400.0, 1500.0])
    def test_bessel_sum_for_large_z(self, z):
        assert rel(struve_l0_scaled(z), struve_l0_scaled_bessel_sum(z)) <= 1e-8

    def test_close_to_i0_for_large_z(self):
        z = 500.0
        gap = rel(struve_l0_scaled(z), bessel_i_scaled(0, z))
        # I0 - L0 ~ 2/(pi z) is exponentially small relative to I0
        assert gap < 1.0 / z

    def test_domain(self):
        with pytest.raises(DomainError):
            struve_l0_scaled(-0.1)
        with pytest.raises(DomainError):
            struve_l0_scaled_bessel_sum(-0.1)


def test_miller_sequence_matches_direct():
    for z in (0.2, 3.0, 30.0, 300.0):
        seq = bessel_i_scaled_sequence(z, 8)
        direct = [bessel_i_scaled(k, z) for k in range(9)]
        assert np.allclose(seq, direct, rtol=1e-12, atol=0)
