"""
Favard constants K_r.

Three independent routes are provided:

    - the defining series (4/pi) sum_k (-1)^(k(r+1)) / (2k+1)^(r+1),
    - the exact value A_r pi^r / (2^r r!) from the zigzag numbers A_r,
    - the generating function sum_r K_r z^r = tan(pi z/2) + sec(pi z/2).

Slowly converging positive series are summed with an integral bracket on the tail: the
estimate is the midpoint of the bracket and the half width is the error bound. Alternating
series use the same midpoint rule with the first omitted term as bracket.
"""
import dataclasses
import fractions
import functools
import logging
import math

import mpmath
import numpy as np

from .config import settings
from .exceptions import ParameterError

logger = logging.getLogger(__name__)

FOUR_OVER_PI = 4.0 / math.pi

###############################################################################################################
# Zigzag numbers

@functools.lru_cache(maxsize=None)
def zigzag_table(limit):
    """
    Zigzag numbers A_0..A_limit from the boustrophedon triangle.

    E(0, 0) = 1, E(n, 0) = 0 for n > 0, E(n, k) = E(n, k-1) + E(n-1, n-k), and A_n = E(n, n).

    Args:
        limit (int): Largest index.

    Returns:
        tuple: Python integers A_0..A_limit.
    """
    if limit < 0:
        raise ParameterError(f"Zigzag limit must be nonnegative, got {limit}.")
    row = [1]
    values = [1]
    for n in range(1, limit + 1):
        new_row = [0]
        for k in range(1, n + 1):
            new_row.append(new_row[k - 1] + row[n - k])
        row = new_row
        values.append(row[n])
    return tuple(values)


def zigzag(n):
    """The n-th zigzag number A_n."""
    if n < 0:
        raise ParameterError(f"Zigzag index must be nonnegative, got {n}.")
    return zigzag_table(max(n, settings().zigzag_limit))[n]

###############################################################################################################
# Exact constants

@dataclasses.dataclass(frozen=True)
class FavardConstant:
    """
    K_r = (numerator / denominator) * pi^r.

    Attributes:
        r (int): Index.
        value (float): Floating point value.
        numerator (int): Numerator of the rational factor, A_r.
        denominator (int): Denominator of the rational factor, 2^r r!.
    """
    r: int
    value: float
    numerator: int
    denominator: int

    @property
    def rational(self):
        return fractions.Fraction(self.numerator, self.denominator)

    @property
    def exact_rational_of_pi_r(self):
        reduced = self.rational
        return reduced.numerator, reduced.denominator

    def label(self):
        """Human readable exact value, e.g. '61/46080*pi^6'."""
        num, den = self.exact_rational_of_pi_r
        if self.r == 0:
            return f"{num}/{den}" if den != 1 else str(num)
        power = "pi" if self.r == 1 else f"pi^{self.r}"
        return f"{num}/{den}*{power}" if den != 1 else f"{num}*{power}"


def favard_exact(r):
    """
    Exact Favard constant.

    Args:
        r (int): Index, 0 <= r <= zigzag_limit.

    Returns:
        FavardConstant: K_r with its rational factor of pi^r.

    Raises:
        ParameterError: If r is negative or above the configured limit.
    """
    limit = settings().zigzag_limit
    if int(r) != r or r < 0:
        raise ParameterError(f"Favard index must be a nonnegative integer, got {r}.")
    if r > limit:
        raise ParameterError(f"Favard index above the supported limit {limit}, got {r}.")
    r = int(r)
    numerator = zigzag(r)
    denominator = 2 ** r * math.factorial(r)
    value = float(fractions.Fraction(numerator, denominator)) * math.pi ** r
    return FavardConstant(r, value, numerator, denominator)


def favard_via_euler_bernoulli(r):
    """K_r from the Taylor coefficients of sec (Euler numbers) and tan (Bernoulli numbers)."""
    if int(r) != r or r < 0:
        raise ParameterError(f"Favard index must be a nonnegative integer, got {r}.")
    r = int(r)
    if r % 2 == 0:
        n = r // 2
        coefficient = fractions.Fraction((-1) ** n * int(mpmath.eulernum(r, exact=True)), math.factorial(r))
    else:
        n = (r + 1) // 2
        b = fractions.Fraction(*mpmath.bernfrac(2 * n))
        coefficient = (-1) ** (n - 1) * 2 ** (2 * n) * (2 ** (2 * n) - 1) * b / math.factorial(2 * n)
    return float(coefficient) * (math.pi / 2) ** r

###############################################################################################################
# Series

def _odd_power_bracket(p, alternating, tol):
    """
    sum_{k>=0} s_k (2k+1)^(-p) with s_k = (-1)^k if alternating else 1.

    Returns:
        tuple: (estimate, half_width) with the true sum inside estimate +/- half_width <= tol.
    """
    if not alternating and p < 2:
        raise ParameterError("The positive series needs an exponent >= 2.")
    # both brackets have width (2K+1)^-p
    K = max(int(math.ceil(((0.5 / tol) ** (1.0 / p) - 1) / 2)), 1)
    ks = np.arange(K, dtype=float)
    terms = (2 * ks + 1) ** -float(p)
    first_omitted = (2 * K + 1) ** -float(p)
    if alternating:
        terms[1::2] *= -1
        sign = -1.0 if K % 2 else 1.0
        estimate = float(np.sum(terms[::-1])) + sign * first_omitted / 2
    else:
        integral = (2 * K + 1) ** (1.0 - p) / (2.0 * (p - 1))
        estimate = float(np.sum(terms[::-1])) + integral + first_omitted / 2
    logger.debug("Odd-power series p=%d alternating=%s summed over %d terms", p, alternating, K)
    return estimate, first_omitted / 2


def favard_S(r, tol=None):
    """
    S(r) = sum over k in 4Z+1 of k^(-r), so that K_r = (4/pi) S(r+1).

    Args:
        r (int): Exponent, r >= 2.
        tol (float, optional): Error bound. Defaults to eval_tol.

    Returns:
        float: The sum.
    """
    tol = tol or settings().eval_tol
    if int(r) != r or r < 2:
        raise ParameterError(f"S(r) is summed for integer r >= 2, got {r}.")
    if tol <= 0:
        raise ParameterError(f"Tolerance must be positive, got {tol}.")
    value, _ = _odd_power_bracket(int(r), alternating=bool(r % 2), tol=tol)
    return value


def favard_series(r, tol=None):
    """
    K_r from its defining series.

    Args:
        r (int): Index, r >= 1.
        tol (float, optional): Error bound. Defaults to eval_tol.

    Returns:
        float: K_r within tol.
    """
    tol = tol or settings().eval_tol
    if int(r) != r or r < 1:
        raise ParameterError(f"Favard series index must be an integer >= 1, got {r}.")
    return FOUR_OVER_PI * favard_S(int(r) + 1, tol / FOUR_OVER_PI)


def ordering_chain_holds(r_max=12, values=None):
    """
    Check K_2 < K_4 < ... < 4/pi < ... < K_3 < K_1.

    Args:
        r_max (int): Largest index checked.
        values (dict, optional): r -> K_r; defaults to favard_exact values.

    Returns:
        bool: Whether the chain holds for 1 <= r <= r_max.
    """
    values = values or {r: favard_exact(r).value for r in range(1, r_max + 1)}
    evens = [values[r] for r in range(2, r_max + 1, 2)]
    odds = [values[r] for r in range(1, r_max + 1, 2)]
    rising = all(a < b for a, b in zip(evens, evens[1:]))
    falling = all(a > b for a, b in zip(odds, odds[1:]))
    return rising and falling and all(v < FOUR_OVER_PI for v in evens) and all(v > FOUR_OVER_PI for v in odds)

###############################################################################################################
# Generating function

def _check_disc(z):
    if not abs(z) < 1:
        raise ParameterError(f"The generating function needs |z| < 1, got {z}.")


def generating_value(z):
    """tan(pi z/2) + sec(pi z/2) for |z| < 1."""
    _check_disc(z)
    x = math.pi * z / 2
    return math.tan(x) + 1.0 / math.cos(x)


def generating_partial_sum(z, r_max=60):
    """sum_{r=0}^{r_max} K_r z^r with exact constants."""
    _check_disc(z)
    return math.fsum(favard_exact(r).value * z ** r for r in range(r_max + 1))

###############################################################################################################
# Partial fractions of the tangent

def _check_pole(z):
    nearest = round(z)
    if abs(z - nearest) < 1e-15 and nearest % 2 == 1:
        raise ParameterError(f"z = {z} is a pole of the partial-fraction series.")


def partial_fraction_closed(z):
    """(pi/(4z)) tan(pi z/2), with the limit pi^2/8 at z = 0."""
    _check_pole(z)
    if z == 0:
        return math.pi ** 2 / 8
    return math.pi / (4 * z) * math.tan(math.pi * z / 2)


def partial_fraction_tan(z, tol=None):
    """
    sum_{k>=0} 1/((2k+1)^2 - z^2) summed with an integral bracket on the tail.

    Args:
        z (float): Any real number except an odd integer.
        tol (float, optional): Error bound. Defaults to eval_tol.

    Returns:
        float: The series value.

    Raises:
        ParameterError: If z is an odd integer.
    """
    tol = tol or settings().eval_tol
    _check_pole(z)
    z = abs(float(z))
    # the tail starts where terms are positive and decreasing
    K = int(math.ceil((math.sqrt(0.5 / tol + z * z) - 1) / 2))
    K = max(K, int(math.ceil((z - 1) / 2)) + 1, 1)
    ks = np.arange(K, dtype=float)
    partial = float(np.sum((1.0 / ((2 * ks + 1) ** 2 - z * z))[::-1]))
    edge = 2 * K + 1
    first_omitted = 1.0 / (edge ** 2 - z * z)
    if z == 0:
        integral = 1.0 / (2 * edge)
    else:
        integral = math.log((edge + z) / (edge - z)) / (4 * z)
    logger.debug("Partial-fraction series at z=%g summed over %d terms", z, K)
    return partial + integral + first_omitted / 2
