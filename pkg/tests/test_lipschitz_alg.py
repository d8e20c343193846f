import math

import numpy as np
import pytest

from favard_l1.exceptions import AliasingError, ParameterError
from favard_l1.fourier_core import eval_trig
from favard_l1.lipschitz_alg import (ChebyPoly, LipFunction, abs_shifted, absolute, build_polynomial,
                                     classical_factors, constant, factors, kernel_representation, linear,
                                     named_function, smooth_sin, to_periodic, verify_bound)

FUNCTIONS = {
    "linear": linear,
    "abs": absolute,
    "abs_shifted(0.5)": lambda: abs_shifted(0.5),
    "abs_shifted(-0.5)": lambda: abs_shifted(-0.5),
    "smooth_sin": smooth_sin,
}

###############################################################################################################
# Functions and their periodic form

def test_to_periodic_of_abs():
    g, h = to_periodic(absolute())
    assert g(0.0) == pytest.approx(1.0, abs=1e-15)
    assert g(math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert h(math.pi / 2) == 0.0
    assert h(0.3) == -1.0
    assert h(2.0) == 1.0
    assert g.breakpoints == pytest.approx((math.pi / 2, 3 * math.pi / 2))


def test_to_periodic_of_linear():
    g, h = to_periodic(linear())
    theta = np.linspace(0, 6, 7)
    np.testing.assert_allclose(g(theta), np.cos(theta), atol=1e-15)
    np.testing.assert_allclose(h(theta), -1.0)
    assert g.breakpoints == ()


def test_named_functions():
    assert named_function("abs")(-0.25) == 0.25
    assert named_function("abs_shifted", shift=-0.5)(0.5) == pytest.approx(1.0)
    assert named_function("const")(0.3) == 1.0
    with pytest.raises(ParameterError):
        named_function("cube")
    with pytest.raises(ParameterError):
        abs_shifted(1.5)


def test_check_lipschitz():
    assert absolute().check_lipschitz()
    assert smooth_sin().check_lipschitz()
    too_steep = LipFunction(lambda x: 2 * x, lambda x: 2 + 0 * x, 1.0, name="2x")
    assert not too_steep.check_lipschitz()


def test_factors():
    T, S = factors(2)
    assert T == pytest.approx(1.0, abs=1e-15)
    assert S == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    with pytest.raises(ParameterError):
        factors(1)


def test_older_factors_are_weaker():
    older_T, older_S = classical_factors(2)
    assert older_T == pytest.approx(math.pi / 4, abs=1e-15)
    assert older_S == pytest.approx(math.pi ** 2 / 16, abs=1e-15)
    for n in (4, 16, 64):
        T, S = factors(n)
        older_T, older_S = classical_factors(n)
        assert T < 1.1 * older_T
        assert S <= older_S

###############################################################################################################
# Chebyshev polynomials

def test_cheby_poly_matches_its_trig_form():
    P = ChebyPoly(np.array([0.5, -1.0, 0.25, 2.0]))
    theta = np.linspace(0, 2 * math.pi, 17)
    np.testing.assert_allclose(eval_trig(P.to_trig(), theta), P(np.cos(theta)), atol=1e-14)
    assert P.degree == 3

###############################################################################################################
# Construction and verification

def test_constant_is_reproduced():
    n = 4
    P = build_polynomial(constant(3.0), n)
    np.testing.assert_allclose(P.coeffs, [3.0, 0, 0, 0, 0], atol=1e-14)
    report = verify_bound(constant(3.0), P, n)
    assert abs(report.max_slack) <= 1e-13
    assert report.max_ratio == 0.0


@pytest.mark.parametrize("name", sorted(FUNCTIONS))
@pytest.mark.parametrize("n", [2, 4, 8, 16, 32])
def test_weighted_bound_holds(name, n):
    f = FUNCTIONS[name]()
    P = build_polynomial(f, n)
    report = verify_bound(f, P, n)
    assert P.degree <= n
    assert report.max_slack <= 1e-9
    assert report.max_ratio <= 1 + 1e-6


@pytest.mark.parametrize("scale", [0.5, 3.0])
def test_bound_scales_with_lipschitz_constant(scale):
    f = absolute().scaled(scale)
    n = 8
    report = verify_bound(f, build_polynomial(f, n), n)
    assert report.max_slack <= 1e-9
    assert report.max_ratio <= 1 + 1e-6


def test_bound_rejects_polynomial_for_a_steeper_function():
    n = 8
    report = verify_bound(absolute(), build_polynomial(absolute().scaled(3.0), n), n)
    assert report.max_slack > 0.1


def test_construction_is_linear_in_scale():
    f = abs_shifted(0.5)
    base = build_polynomial(f, 8)
    scaled = build_polynomial(f.scaled(2.5), 8)
    assert f.scaled(2.5).lip_bound == 2.5
    np.testing.assert_allclose(scaled.coeffs, 2.5 * base.coeffs, atol=1e-10)


def test_construction_guards():
    with pytest.raises(ParameterError):
        build_polynomial(linear(), 1)
    with pytest.raises(AliasingError):
        build_polynomial(linear(), 4, samples=1000)
    with pytest.raises(AliasingError):
        build_polynomial(linear(), 4, samples=16)


def test_verification_grid_guard():
    P = build_polynomial(linear(), 2)
    with pytest.raises(ParameterError):
        verify_bound(linear(), P, 2, grid=500)

###############################################################################################################
# Representation identity

@pytest.mark.parametrize("name", ["linear", "smooth_sin"])
def test_kernel_representation(name):
    check = kernel_representation(FUNCTIONS[name]())
    assert check.max_error <= 1e-6
    assert check.theta.shape == (2 ** 14,)


def test_kernel_representation_of_abs():
    # h jumps at pi/2 and 3pi/2, where the trapezoid convolution is only first-order accurate
    check = kernel_representation(absolute())
    assert check.max_error <= 1e-3
