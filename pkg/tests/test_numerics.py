"""Unit tests for the quadrature and minimization kernels."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drivendelta.errors import DomainError, ToleranceError
from drivendelta.quadrature import (adaptive_quad, bracket_min,
                                    fourier_coefficient, pv_integral,
                                    semiinf_integral)


class TestAdaptiveQuad:
    def test_sine_arch(self):
        res = adaptive_quad(np.sin, 0.0, math.pi, tol=1e-12)
        assert res.value == pytest.approx(2.0, abs=1e-11)
        assert res.error_estimate <= 1e-12

    def test_polynomial_is_exact(self):
        res = adaptive_quad(lambda x: 3 * x**2 - 2 * x + 1, 0.0, 2.0)
        assert res.value == pytest.approx(6.0, abs=1e-12)

    def test_complex_integrand(self):
        res = adaptive_quad(lambda x: np.exp(1j * x), 0.0, math.pi, tol=1e-12)
        assert complex(res.value) == pytest.approx(2j, abs=1e-10)

    def test_narrow_peak_refined(self):
        res = adaptive_quad(lambda x: 1.0 / (1e-4 + x * x), -1.0, 1.0, tol=1e-9)
        exact = 2.0 / 1e-2 * math.atan(1.0 / 1e-2)
        assert res.value == pytest.approx(exact, rel=1e-8)

    def test_rejects_bad_interval(self):
        with pytest.raises(DomainError):
            adaptive_quad(np.sin, 1.0, 1.0)
        with pytest.raises(DomainError):
            adaptive_quad(np.sin, 0.0, 1.0, tol=-1.0)

    def test_budget_exhaustion_reports_value(self):
        with pytest.raises(ToleranceError) as exc:
            adaptive_quad(lambda x: np.abs(x) ** -0.5 * (x != 0), 1e-30, 1.0,
                          tol=1e-14, max_intervals=8)
        assert exc.value.value is not None

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-5, 5), st.floats(-5, 5))
    def test_constant_integral(self, c, a):
        res = adaptive_quad(lambda x: c * np.ones_like(x), a, a + 1.5)
        assert res.value == pytest.approx(1.5 * c, abs=1e-10)

    def test_deterministic(self):
        f = lambda x: np.sin(3 * x) / (1 + x * x)
        r1 = adaptive_quad(f, 0.0, 4.0, tol=1e-11)
        r2 = adaptive_quad(f, 0.0, 4.0, tol=1e-11)
        assert r1.value == r2.value
        assert r1.error_estimate == r2.error_estimate


class TestPrincipalValue:
    def test_pure_pole_vanishes_symmetrically(self):
        res = pv_integral(lambda x: 1.0 / (x - 1.0), 1.0, 0.0, 2.0)
        assert res.value == pytest.approx(0.0, abs=1e-10)

    def test_shifted_pole_log_weight(self):
        # PV int_0^3 dx / (x - 1) = ln 2
        res = pv_integral(lambda x: 1.0 / (x - 1.0), 1.0, 0.0, 3.0)
        assert res.value == pytest.approx(math.log(2.0), abs=1e-10)

    def test_regular_plus_pole(self):
        # x/(x-1) = 1 + 1/(x-1): PV over [0, 2] gives 2
        res = pv_integral(lambda x: x / (x - 1.0), 1.0, 0.0, 2.0)
        assert res.value == pytest.approx(2.0, abs=1e-9)

    def test_supplied_residue(self):
        res = pv_integral(lambda x: 2.0 / (x - 1.0), 1.0, 0.0, 2.0, residue=2.0)
        assert res.value == pytest.approx(0.0, abs=1e-10)

    def test_pole_outside_rejected(self):
        with pytest.raises(DomainError):
            pv_integral(lambda x: 1.0 / (x - 5.0), 5.0, 0.0, 2.0)


class TestSemiInfinite:
    def test_lorentzian(self):
        res = semiinf_integral(lambda x: 1.0 / (1.0 + x * x), split=2.0)
        assert res.value == pytest.approx(math.pi / 2.0, abs=1e-8)

    def test_inverse_quartic(self):
        # int_0^inf dx / (1 + x**4) = pi / (2 sqrt(2))
        res = semiinf_integral(lambda x: 1.0 / (1.0 + x**4), split=3.0)
        assert res.value == pytest.approx(math.pi / (2 * math.sqrt(2)), abs=1e-8)

    def test_rejects_bad_split(self):
        with pytest.raises(DomainError):
            semiinf_integral(lambda x: 1.0 / (1.0 + x * x), split=0.0)


class TestFourierCoefficient:
    @pytest.mark.parametrize("m", [0, 1, -2, 5])
    def test_pure_harmonic(self, m):
        f = lambda tau: np.exp(-1j * m * tau)
        for n in (-3, 0, 1, m):
            res = fourier_coefficient(f, n)
            expected = 1.0 if n == m else 0.0
            assert abs(complex(res.value) - expected) < 1e-12

    def test_sine_coefficients(self):
        f = lambda tau: np.sin(tau)
        plus = fourier_coefficient(f, 1).value
        minus = fourier_coefficient(f, -1).value
        assert complex(plus) == pytest.approx(0.5j, abs=1e-12)
        assert complex(minus) == pytest.approx(-0.5j, abs=1e-12)


class TestBracketMin:
    def test_parabola(self):
        x, f, warnings = bracket_min(lambda x: (x - 0.3) ** 2, -1.0, 1.0)
        assert x == pytest.approx(0.3, abs=1e-7)
        assert f == pytest.approx(0.0, abs=1e-12)
        assert warnings == []

    def test_boundary_minimum(self):
        x, f, _ = bracket_min(lambda x: x, 0.0, 1.0)
        assert x == pytest.approx(0.0, abs=1e-6)

    def test_multimodal_warns(self):
        f = lambda x: math.cos(8 * x)
        _, _, warnings = bracket_min(f, 0.0, 2.0)
        assert warnings

    def test_rejects_bad_interval(self):
        with pytest.raises(DomainError):
            bracket_min(lambda x: x * x, 1.0, 0.0)
