"""
Algebraic polynomial approximation of Lipschitz functions on [-1, 1].

With x = cos(theta), g(theta) = f(cos theta) is even and g' = h sin, h = -f'(cos theta). Then

    g - g^(0) = sin(theta) (h * K1)(theta) - cos(theta) (h * K2)(theta),

and replacing K1, K2 by their best L1 approximations of degree n-1 gives an even trigonometric
polynomial of degree n, that is an algebraic polynomial P_n in x, with

    |f(x) - P_n(x)| <= ||f'||_inf (T(n) sqrt(1 - x^2) + S(n) |x|),
    T(n) = tan(pi/2n),  S(n) = sec(pi/2n) - 1.
"""
import dataclasses
import logging
import math
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev

from .best_l1 import best_poly_candidate
from .config import settings
from .exceptions import AliasingError, ConstructionError, ParameterError
from .favard import favard_exact
from .fourier_core import TWO_PI, PeriodicFn, TrigPoly, circular_convolution, convolve_poly, fourier_coeffs
from .kernels import quasi_eval, quasi_kernel

logger = logging.getLogger(__name__)

ODD_PART_TOL = 1e-10
KINK_SNAP = 1e-12

###############################################################################################################
# Functions on [-1, 1]

@dataclasses.dataclass(frozen=True, eq=False)
class LipFunction:
    """
    A Lipschitz function on [-1, 1].

    Attributes:
        f (Callable): Vectorized values.
        df (Callable): Vectorized derivative, midpoint value at kinks.
        lip_bound (float): Upper bound of |df|.
        kinks (tuple): Points in (-1, 1) where df jumps.
        name (str): Label.
    """
    f: Callable
    df: Callable
    lip_bound: float
    kinks: tuple = ()
    name: str = ""

    def __call__(self, x):
        return self.f(np.asarray(x, dtype=float))

    def scaled(self, c):
        return LipFunction(lambda x: c * self.f(x), lambda x: c * self.df(x), abs(c) * self.lip_bound,
                           self.kinks, f"{c:g}*{self.name}")

    def check_lipschitz(self, pairs=1000, seed=0):
        """Spot-check |f(x) - f(y)| <= lip_bound |x - y| on random pairs."""
        rng = np.random.default_rng(seed)
        x, y = rng.uniform(-1.0, 1.0, size=(2, pairs))
        slack = np.abs(self.f(x) - self.f(y)) - self.lip_bound * np.abs(x - y)
        return bool(np.all(slack <= 1e-12))


def constant(c=1.0):
    return LipFunction(lambda x: np.full_like(np.asarray(x, dtype=float), c), lambda x: np.zeros_like(x), 0.0,
                       name="const")


def linear():
    return LipFunction(lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(x), 1.0, name="linear")


def absolute():
    return LipFunction(np.abs, np.sign, 1.0, (0.0,), "abs")


def abs_shifted(a):
    if not -1 < a < 1:
        raise ParameterError(f"Shift must lie in (-1, 1), got {a}.")
    return LipFunction(lambda x: np.abs(x - a), lambda x: np.sign(x - a), 1.0, (a,), f"abs_shifted({a:g})")


def smooth_sin():
    return LipFunction(np.sin, np.cos, 1.0, name="smooth_sin")


def named_function(name, shift=0.5):
    """
    Built-in test functions by name.

    Args:
        name (str): const, linear, abs, abs_shifted or smooth_sin.
        shift (float): The a of abs_shifted, |x - a|.

    Returns:
        LipFunction: The function.
    """
    factories = {
        "const": constant,
        "linear": linear,
        "abs": absolute,
        "abs_shifted": lambda: abs_shifted(shift),
        "smooth_sin": smooth_sin,
    }
    if name not in factories:
        raise ParameterError(f"Unknown test function {name!r}; expected one of {', '.join(factories)}.")
    return factories[name]()

###############################################################################################################
# Chebyshev polynomials

@dataclasses.dataclass(frozen=True, eq=False)
class ChebyPoly:
    """
    sum_k a_k T_k(x).

    Attributes:
        coeffs (np.ndarray): a_0..a_n.
    """
    coeffs: np.ndarray

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        return chebyshev.chebval(np.asarray(x, dtype=float), self.coeffs)

    def to_trig(self):
        """The even trigonometric polynomial P(cos theta)."""
        return TrigPoly.from_cosine(self.coeffs)

###############################################################################################################
# Pipeline

def to_periodic(f):
    """
    g(theta) = f(cos theta) and h(theta) = -f'(cos theta), so that g' = h sin.

    Kinks x = a of f become breakpoints +/- arccos(a) of both functions. On a breakpoint h takes
    -f'(a), the midpoint value, since cos(arccos(a)) need not round back to a.
    """
    angles = tuple(s * math.acos(a) for a in f.kinks for s in (1, -1))

    def derivative(theta):
        x = np.cos(theta)
        for a in f.kinks:
            corner = math.acos(a)
            on_kink = (np.abs(theta - corner) < KINK_SNAP) | (np.abs(theta - (TWO_PI - corner)) < KINK_SNAP)
            x = np.where(on_kink, a, x)
        return -f.df(x)

    g = PeriodicFn(lambda theta: f.f(np.cos(theta)), angles, name=f"g[{f.name}]")
    h = PeriodicFn(derivative, angles, name=f"h[{f.name}]")
    return g, h


def factors(n):
    """(T(n), S(n)) = (tan(pi/2n), sec(pi/2n) - 1)."""
    if n < 2:
        raise ParameterError(f"The weight factors need n >= 2, got {n}.")
    x = math.pi / (2 * n)
    return math.tan(x), 1.0 / math.cos(x) - 1.0


def classical_factors(n):
    """(K_1/n, 2 K_2/n^2), the older weight pair, for comparison columns."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}.")
    return favard_exact(1).value / n, 2 * favard_exact(2).value / n ** 2


def build_polynomial(f, n, samples=None):
    """
    Degree-n algebraic polynomial with the weighted error bound.

    Args:
        f (LipFunction): The function.
        n (int): Degree, n >= 2.
        samples (int, optional): Power of two >= 8n for the coefficients of h. Defaults to build_grid.

    Returns:
        ChebyPoly: Coefficients in the Chebyshev basis.

    Raises:
        ConstructionError: If the trigonometric polynomial has a non-negligible odd part.
    """
    if n < 2:
        raise ParameterError(f"build_polynomial needs n >= 2, got {n}.")
    samples = samples or settings().build_grid
    if samples < 8 * n or samples & (samples - 1):
        raise AliasingError(f"Samples must be a power of two >= 8n = {8 * n}, got {samples}.")

    g, h = to_periodic(f)
    tau_1 = best_poly_candidate(quasi_kernel("K1"), n)
    tau_2 = best_poly_candidate(quasi_kernel("K2"), n)
    # kinks make h jump; Gauss-Legendre on the smooth arcs integrates those exactly
    method = "gauss" if f.kinks else None
    h_hat = fourier_coeffs(h, n - 1, samples, method)
    mean = fourier_coeffs(g, 0, samples, method)[0].real

    t = convolve_poly(h_hat, tau_1.padded(n - 1)).mul_sin() - convolve_poly(h_hat, tau_2.padded(n - 1)).mul_cos()
    t = t + mean

    scale = max(1.0, float(np.max(np.abs(t.coeffs))))
    odd = float(np.max(np.abs(t.odd_part().coeffs)))
    if odd > ODD_PART_TOL * scale:
        raise ConstructionError(f"Polynomial for {f.name}, n={n} has an odd part of size {odd:.3e}.")
    poly = ChebyPoly(t.cosine_coeffs())
    logger.info("Built degree %d polynomial for %s", poly.degree, f.name)
    return poly


@dataclasses.dataclass(frozen=True)
class BoundReport:
    """
    Outcome of verify_bound.

    Attributes:
        max_slack (float): max |f - P| - L (T sqrt(1-x^2) + S |x|); <= 0 when the bound holds.
        max_ratio (float): max |f - P| / bound where bound > 1e-12.
        argmax_x (float): Where the slack is largest.
        degree (int): Degree of P.
        T (float): tan(pi/2n).
        S (float): sec(pi/2n) - 1.
    """
    max_slack: float
    max_ratio: float
    argmax_x: float
    degree: int
    T: float
    S: float


def verify_bound(f, P, n, grid=None):
    """
    Check |f(x) - P(x)| <= L (T(n) sqrt(1 - x^2) + S(n) |x|) on x = cos(pi j / G), j = 0..G,
    where L is the Lipschitz bound of f.

    Args:
        f (LipFunction): The function.
        P (ChebyPoly): The polynomial.
        n (int): Degree used for T(n), S(n).
        grid (int, optional): G >= 1000. Defaults to verify_grid.

    Returns:
        BoundReport: Slack and ratio statistics.
    """
    grid = grid or settings().verify_grid
    if grid < 1000:
        raise ParameterError(f"Verification needs at least 1000 points, got {grid}.")
    T, S = factors(n)
    angles = math.pi * np.arange(grid + 1) / grid
    x = np.cos(angles)
    error = np.abs(f(x) - P(x))
    bound = f.lip_bound * (T * np.sin(angles) + S * np.abs(x))
    slack = error - bound
    worst = int(np.argmax(slack))
    positive = bound > 1e-12
    max_ratio = float(np.max(error[positive] / bound[positive])) if np.any(positive) else 0.0
    report = BoundReport(float(slack[worst]), max_ratio, float(x[worst]), P.degree, T, S)
    if report.max_slack > settings().slack_tol:
        logger.warning("Bound violated for %s, n=%d: slack %.3e at x=%.6g", f.name, n, report.max_slack,
                       report.argmax_x)
    return report

###############################################################################################################
# Representation identity

@dataclasses.dataclass(frozen=True, eq=False)
class RepresentationCheck:
    theta: np.ndarray
    reconstructed: np.ndarray
    exact: np.ndarray
    max_error: float


def kernel_representation(f, samples=2 ** 14):
    """
    Rebuild g from sin(theta)(h * K1) - cos(theta)(h * K2) + g^(0) with grid convolutions.

    Args:
        f (LipFunction): The function.
        samples (int): Grid size M; convolutions use the trapezoid rule through the FFT.

    Returns:
        RepresentationCheck: Reconstruction, exact values and the max error.
    """
    g, h = to_periodic(f)
    theta = TWO_PI * np.arange(samples) / samples
    h_values = h(theta)
    conv_1 = circular_convolution(h_values, quasi_eval("K1", theta))
    conv_2 = circular_convolution(h_values, quasi_eval("K2", theta))
    mean = fourier_coeffs(g, 0, samples)[0].real
    reconstructed = np.sin(theta) * conv_1 - np.cos(theta) * conv_2 + mean
    exact = g(theta)
    max_error = float(np.max(np.abs(reconstructed - exact)))
    logger.debug("Representation identity for %s on %d points: max error %.3e", f.name, samples, max_error)
    return RepresentationCheck(theta, reconstructed, exact, max_error)
