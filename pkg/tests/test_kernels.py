import fractions
import math

import numpy as np
import pytest

from favard_l1.exceptions import ParameterError
from favard_l1.fourier_core import TWO_PI, fourier_coeffs
from favard_l1.kernels import (KernelKind, Parity, bernoulli_closed_form, bernoulli_coef, bernoulli_eval,
                               bernoulli_polynomial_coefficients,
                               bernoulli_kernel, bernoulli_partial_sum, bernoulli_primitive,
                               bernoulli_truncation, check_steklov, parse_kernel, quasi_coef, quasi_eval,
                               quasi_kernel, quasi_primitive, steklov_bspline, steklov_coef, steklov_eval,
                               steklov_kernel, steklov_primitive)

GRID = TWO_PI * np.arange(4096) / 4096


def central_difference(F, theta, delta=1e-5):
    return (F(theta + delta) - F(theta - delta)) / (2 * delta)

###############################################################################################################
# Bernoulli kernels

@pytest.mark.parametrize("r, k, expected", [(1, 1, -1j), (2, 2, -0.25), (3, 0, 0), (3, -1, -1j), (4, 1, 1.0)])
def test_bernoulli_coef(r, k, expected):
    assert bernoulli_coef(r, k) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("r", [0, 65, 2.5])
def test_bernoulli_order_guard(r):
    with pytest.raises(ParameterError):
        bernoulli_coef(r, 1)
    with pytest.raises(ParameterError):
        bernoulli_kernel(r)


@pytest.mark.parametrize("theta, expected", [(math.pi, 0.0), (math.pi / 2, math.pi / 2), (0.0, 0.0),
                                             (TWO_PI, 0.0), (-math.pi / 2, -math.pi / 2)])
def test_b1_values(theta, expected):
    assert bernoulli_eval(1, theta) == pytest.approx(expected, abs=1e-14)


def test_b2_at_zero():
    assert bernoulli_eval(2, 0.0) == pytest.approx(-math.pi ** 2 / 3, abs=1e-12)


def test_b2_against_direct_summation():
    k = np.arange(1, 2_000_001, dtype=float)
    direct = -2.0 * math.fsum(1.0 / k ** 2) - 2.0 / 2_000_000
    assert bernoulli_eval(2, 0.0) == pytest.approx(direct, abs=1e-11)


def test_bernoulli_polynomial_coefficients_are_exact():
    assert bernoulli_polynomial_coefficients(4) == (1, -2, 1, 0, fractions.Fraction(-1, 30))
    assert bernoulli_polynomial_coefficients(1) == (1, fractions.Fraction(-1, 2))


def test_b4_closed_form_matches_its_polynomial():
    x = GRID / TWO_PI
    explicit = -(TWO_PI ** 4) / 24 * (x ** 4 - 2 * x ** 3 + x ** 2 - 1 / 30)
    np.testing.assert_allclose(bernoulli_closed_form(4, GRID), explicit, rtol=0, atol=1e-13)
    np.testing.assert_allclose(bernoulli_eval(4, GRID), explicit, rtol=0, atol=1e-11)


@pytest.mark.parametrize("r", [5, 6, 9])
def test_partial_sum_matches_closed_form(r):
    theta = GRID[::8]
    np.testing.assert_allclose(bernoulli_eval(r, theta), bernoulli_closed_form(r, theta), atol=1e-11)


def test_partial_sum_is_chunked_consistently():
    theta = TWO_PI * np.arange(10_000) / 10_000
    values = bernoulli_partial_sum(5, theta, 50)
    np.testing.assert_allclose(values[9_000:9_010], bernoulli_partial_sum(5, theta[9_000:9_010], 50), atol=1e-15)
    assert values.shape == theta.shape


def test_b1_partial_sum_is_twice_sine():
    theta = np.linspace(0.1, 3.0, 5)
    np.testing.assert_allclose(bernoulli_partial_sum(1, theta, 1), 2 * np.sin(theta), atol=1e-15)


@pytest.mark.parametrize("r", [3, 4, 7])
def test_bernoulli_parity(r):
    theta = np.linspace(0.2, 3.0, 15)
    sign = -1 if r % 2 else 1
    np.testing.assert_allclose(bernoulli_eval(r, -theta), sign * bernoulli_eval(r, theta), atol=1e-12)


def test_bernoulli_truncation_is_minimal():
    tol = 1e-10
    K = bernoulli_truncation(4, tol)
    bound = lambda n: 2.0 * n ** -3 / 3
    assert bound(K) <= tol < bound(K - 1)


def test_bernoulli_truncation_guards():
    with pytest.raises(ParameterError):
        bernoulli_truncation(1, 1e-6)
    with pytest.raises(ParameterError):
        bernoulli_truncation(3, 0.0)


def test_bernoulli_primitive_differentiates_back():
    for r, theta in [(1, 1.0), (2, 2.5), (4, 4.0)]:
        derivative = central_difference(lambda t: bernoulli_primitive(r, t), theta)
        assert derivative == pytest.approx(bernoulli_eval(r, theta), abs=1e-8)


def test_bernoulli_kernel_fields():
    odd = bernoulli_kernel(3)
    assert odd.parity is Parity.ODD
    assert odd.kind is KernelKind.BERNOULLI
    assert odd.jump_points == ()
    assert bernoulli_kernel(1).jump_points == (0.0,)
    assert bernoulli_kernel(2).parity is Parity.EVEN
    assert odd.mean == 0.0

###############################################################################################################
# Quasi-Bernoulli kernels

@pytest.mark.parametrize("which, k, expected", [("K1", 2, 2 / 3j), ("K1", 1, 1 / 4j), ("K1", -1, -1 / 4j),
                                                ("K1", 0, 0), ("K2", 0, 1), ("K2", 1, 0.25), ("K2", 3, -0.125)])
def test_quasi_coef(which, k, expected):
    assert quasi_coef(which, k) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("which, theta, expected", [("K1", math.pi / 2, 0.0), ("K2", math.pi / 2, math.pi / 2),
                                                    ("K1", math.pi, 0.0), ("K1", 0.0, 0.0)])
def test_quasi_eval(which, theta, expected):
    assert quasi_eval(which, theta) == pytest.approx(expected, abs=1e-14)


def test_quasi_names_are_checked():
    with pytest.raises(ParameterError):
        quasi_coef("K3", 1)


@pytest.mark.parametrize("which, mean", [("K1", 0.0), ("K2", 1.0)])
def test_quasi_primitive_differentiates_back(which, mean):
    for theta in (1.0, 2.5, 4.0):
        derivative = central_difference(lambda t: quasi_primitive(which, t), theta)
        assert derivative == pytest.approx(quasi_eval(which, theta) - mean, abs=1e-8)


def test_quasi_primitive_is_periodic():
    for which in ("K1", "K2"):
        assert quasi_primitive(which, 1e-9) == pytest.approx(quasi_primitive(which, TWO_PI - 1e-9), abs=1e-7)

###############################################################################################################
# Steklov kernels

@pytest.mark.parametrize("m, h, k, expected", [(1, 0.5, 1, 2 / math.pi), (3, 0.2, 0, 1.0), (1, 0.5, 2, 0.0)])
def test_steklov_coef(m, h, k, expected):
    assert steklov_coef(m, h, k) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("m, h, theta, expected", [(1, 0.25, 0.0, 4.0), (2, 0.25, 0.0, 4.0), (1, 0.25, math.pi, 0.0),
                                                   (1, 0.25, math.pi / 4, 2.0)])
def test_steklov_eval(m, h, theta, expected):
    assert steklov_eval(m, h, theta) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("m, h", [(2, 0.5), (1, 1.5), (0, 0.1), (3, 0.4), (1, 0.0)])
def test_steklov_guards(m, h):
    with pytest.raises(ParameterError):
        check_steklov(m, h)


@pytest.mark.parametrize("m, h", [(m, h) for m in (1, 2, 3, 4) for h in (1 / 8, 1 / 4, 3 / 8) if m * h < 1])
def test_steklov_bernoulli_sum_matches_bspline(m, h):
    np.testing.assert_allclose(steklov_eval(m, h, GRID), steklov_bspline(m, h, GRID), atol=1e-9)


def test_steklov_vanishes_outside_support():
    theta = np.linspace(math.pi / 4 + 1e-3, math.pi, 50)
    np.testing.assert_allclose(steklov_eval(2, 1 / 8, theta), 0.0, atol=1e-10)


def test_steklov_bspline_has_unit_mass():
    assert float(np.mean(steklov_bspline(3, 1 / 8, GRID))) == pytest.approx(1.0, abs=1e-8)


def test_steklov_primitive_differentiates_back():
    for theta in (0.3, 1.2, 5.0):
        derivative = central_difference(lambda t: steklov_primitive(2, 0.25, t), theta)
        assert derivative == pytest.approx(steklov_eval(2, 0.25, theta) - 1.0, abs=1e-8)


def test_steklov_kernel_fields():
    spec = steklov_kernel(2, 0.25)
    assert spec.name == "S2:0.25"
    assert spec.parity is Parity.EVEN
    assert spec.mean == 1.0
    assert steklov_kernel(1, 0.25).jump_points == pytest.approx((math.pi / 4, -math.pi / 4))

###############################################################################################################
# Fourier coefficients against the closed forms

@pytest.mark.parametrize("name", ["B1", "B2", "K1", "K2", "S2:1/4"])
def test_numerical_coefficients_match_closed_forms(name):
    kernel = parse_kernel(name)
    numeric = fourier_coeffs(kernel.as_periodic(), 64, 2 ** 16)
    for k in range(-64, 65):
        assert numeric[k] == pytest.approx(kernel.fourier_coef(k), abs=1e-6)

###############################################################################################################
# Names

def test_parse_kernel():
    assert parse_kernel("B3").r == 3
    assert parse_kernel("b3").parity is Parity.ODD
    assert parse_kernel("K2").kind is KernelKind.QUASI_K2
    steklov = parse_kernel("S2:1/4")
    assert (steklov.m, steklov.h) == (2, 0.25)
    assert quasi_kernel("k1").name == "K1"


@pytest.mark.parametrize("name", ["X", "B65", "B0", "S2:x", "S3:1/2", "S1:1/0"])
def test_parse_kernel_rejects(name):
    with pytest.raises(ParameterError):
        parse_kernel(name)
