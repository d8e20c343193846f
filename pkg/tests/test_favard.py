import fractions
import math

import pytest

from favard_l1.config import load_config
from favard_l1.exceptions import ParameterError
from favard_l1.favard import (favard_exact, favard_S, favard_series, favard_via_euler_bernoulli,
                              generating_partial_sum, generating_value, ordering_chain_holds,
                              partial_fraction_closed, partial_fraction_tan, zigzag, zigzag_table)

PI = math.pi
KNOWN = {
    0: 1.0,
    1: PI / 2,
    2: PI ** 2 / 8,
    3: PI ** 3 / 24,
    4: 5 * PI ** 4 / 384,
    5: PI ** 5 / 240,
    6: 61 * PI ** 6 / 46080,
}

###############################################################################################################
# Zigzag numbers and exact constants

def test_zigzag_prefix():
    assert zigzag_table(10) == (1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521)
    assert zigzag(6) == 61


def test_zigzag_guards():
    with pytest.raises(ParameterError):
        zigzag(-1)
    with pytest.raises(ParameterError):
        zigzag_table(-2)


@pytest.mark.parametrize("r", sorted(KNOWN))
def test_favard_exact_known_values(r):
    assert favard_exact(r).value == pytest.approx(KNOWN[r], abs=1e-12)


def test_favard_exact_rationals():
    assert favard_exact(0).exact_rational_of_pi_r == (1, 1)
    assert favard_exact(3).exact_rational_of_pi_r == (1, 24)
    assert favard_exact(6).rational == fractions.Fraction(61, 46080)
    assert favard_exact(6).label() == "61/46080*pi^6"
    assert favard_exact(1).label() == "1/2*pi"
    assert favard_exact(0).label() == "1"


@pytest.mark.parametrize("r", [-1, 65, 1.5])
def test_favard_exact_guards(r):
    with pytest.raises(ParameterError):
        favard_exact(r)


def test_zigzag_limit_follows_configuration(write_config):
    load_config(write_config("zigzag_limit: 8\n"))
    assert favard_exact(8).numerator == 1385
    with pytest.raises(ParameterError):
        favard_exact(9)


@pytest.mark.parametrize("r", range(0, 13))
def test_euler_bernoulli_route(r):
    assert favard_via_euler_bernoulli(r) == pytest.approx(favard_exact(r).value, rel=1e-14)

###############################################################################################################
# Series

@pytest.mark.parametrize("r", [1, 2, 4])
def test_favard_series_examples(r):
    assert favard_series(r, tol=1e-12) == pytest.approx(KNOWN[r], abs=1e-12)


@pytest.mark.parametrize("r", range(1, 13))
def test_favard_series_matches_exact(r):
    assert favard_series(r, tol=1e-12) == pytest.approx(favard_exact(r).value, abs=1e-11)


def test_favard_S_values():
    assert favard_S(2, 1e-12) == pytest.approx(PI ** 2 / 8, abs=1e-12)
    assert favard_S(3, 1e-12) == pytest.approx(PI ** 3 / 32, abs=1e-12)


@pytest.mark.parametrize("r", [0, 1])
def test_favard_S_guard(r):
    with pytest.raises(ParameterError):
        favard_S(r)


def test_favard_series_guard():
    with pytest.raises(ParameterError):
        favard_series(0)


def test_ordering_chain():
    assert ordering_chain_holds(12)
    values = {r: favard_exact(r).value for r in range(1, 7)}
    values[2], values[4] = values[4], values[2]
    assert not ordering_chain_holds(6, values)

###############################################################################################################
# Generating function

@pytest.mark.parametrize("z, expected", [(0.0, 1.0), (0.5, 1 + math.sqrt(2)), (-0.5, math.sqrt(2) - 1)])
def test_generating_value(z, expected):
    assert generating_value(z) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("z", [0.1, -0.1, 0.25, -0.25, 0.5, -0.5])
def test_generating_identity(z):
    assert generating_partial_sum(z, 60) == pytest.approx(generating_value(z), abs=1e-9)


@pytest.mark.parametrize("z", [1.0, -1.0, 2.0])
def test_generating_disc_guard(z):
    with pytest.raises(ParameterError):
        generating_value(z)

###############################################################################################################
# Partial fractions of the tangent

def test_partial_fraction_at_zero():
    assert partial_fraction_tan(0.0) == pytest.approx(PI ** 2 / 8, abs=1e-12)


@pytest.mark.parametrize("z", [1 / 3, 1 / 2, 0.9, -0.9, 2.0, 2.5])
def test_partial_fraction_matches_tangent(z):
    assert partial_fraction_tan(z) == pytest.approx(partial_fraction_closed(z), abs=1e-10)


def test_partial_fraction_examples():
    assert partial_fraction_closed(0.5) == pytest.approx(PI / 2, abs=1e-15)
    assert partial_fraction_closed(1 / 3) == pytest.approx(3 * PI / 4 * math.tan(PI / 6), abs=1e-15)


@pytest.mark.parametrize("z", [1.0, -1.0, 3.0])
def test_partial_fraction_rejects_poles(z):
    with pytest.raises(ParameterError):
        partial_fraction_tan(z)
    with pytest.raises(ParameterError):
        partial_fraction_closed(z)
