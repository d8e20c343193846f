"""
Periodic analysis toolkit: trigonometric polynomials, Fourier coefficients, L1 quadrature
and convolution with trigonometric polynomials.

All periodic quantities are normalized by 1/(2*pi):

    f^(k) = (1/2pi) int_0^{2pi} f(t) e^{-ikt} dt,     ||f||_1 = (1/2pi) int_0^{2pi} |f(t)| dt.
"""
import dataclasses
import logging
import math
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.optimize import bisect

from .config import settings
from .exceptions import (AliasingError, CorruptedCoefficientsError, InsufficientSamplingError,
                         ParameterError, QuadratureError)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
IMAG_RESIDUE_TOL = 1e-12
GRID_ALIGN_TOL = 1e-9
SIGN_NOISE = 1e-11
EVAL_NOISE_FACTOR = 4

###############################################################################################################
# Trigonometric polynomials

@dataclasses.dataclass(frozen=True, eq=False)
class TrigPoly:
    """
    Trigonometric polynomial sum_{|k| <= degree} c_k e^{ik theta}.

    Attributes:
        coeffs (np.ndarray): Complex coefficients, coeffs[k + degree] = c_k.
    """
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size % 2 != 1:
            raise ParameterError("TrigPoly needs an odd-length coefficient vector centred at k = 0.")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    # Constructors
    @classmethod
    def zeros(cls, degree=0):
        return cls(np.zeros(2 * degree + 1, dtype=complex))

    @classmethod
    def constant(cls, value, degree=0):
        poly = np.zeros(2 * degree + 1, dtype=complex)
        poly[degree] = value
        return cls(poly)

    @classmethod
    def from_map(cls, mapping):
        """Build from a map k -> c_k; missing frequencies are zero."""
        degree = max((abs(int(k)) for k in mapping), default=0)
        poly = np.zeros(2 * degree + 1, dtype=complex)
        for k, value in mapping.items():
            poly[int(k) + degree] += value
        return cls(poly)

    @classmethod
    def from_sine(cls, b):
        """sum_{j>=1} b[j-1] sin(j theta)."""
        b = np.asarray(b, dtype=float)
        degree = b.size
        poly = np.zeros(2 * degree + 1, dtype=complex)
        poly[degree + 1:] = b / 2j
        poly[:degree] = (-b / 2j)[::-1]
        return cls(poly)

    @classmethod
    def from_cosine(cls, a):
        """sum_{j>=0} a[j] cos(j theta)."""
        a = np.asarray(a, dtype=float)
        degree = a.size - 1
        poly = np.zeros(2 * degree + 1, dtype=complex)
        poly[degree] = a[0]
        poly[degree + 1:] = a[1:] / 2
        poly[:degree] = (a[1:] / 2)[::-1]
        return cls(poly)

    # Access
    @property
    def degree(self):
        return (self.coeffs.size - 1) // 2

    @property
    def frequencies(self):
        return np.arange(-self.degree, self.degree + 1)

    def coeff(self, k):
        k = int(k)
        if abs(k) > self.degree:
            return 0j
        return complex(self.coeffs[k + self.degree])

    def as_map(self):
        return {int(k): complex(c) for k, c in zip(self.frequencies, self.coeffs)}

    def is_real(self, tol=IMAG_RESIDUE_TOL):
        """True iff c_{-k} = conj(c_k) for every k, within tol."""
        return bool(np.max(np.abs(self.coeffs - np.conj(self.coeffs[::-1])), initial=0.0) <= tol)

    def sine_coeffs(self):
        """b_j, j = 1..degree, of the sine part."""
        d = self.degree
        return (1j * (self.coeffs[d + 1:] - self.coeffs[:d][::-1])).real

    def cosine_coeffs(self):
        """a_j, j = 0..degree, of the cosine part."""
        d = self.degree
        return np.concatenate(([self.coeffs[d].real], (self.coeffs[d + 1:] + self.coeffs[:d][::-1]).real))

    def __call__(self, theta):
        """Complex values sum c_k e^{ik theta}; see eval_trig for the real-valued check."""
        theta = np.asarray(theta, dtype=float)
        phase = np.exp(1j * np.multiply.outer(theta, self.frequencies))
        return phase @ self.coeffs

    # Algebra
    def padded(self, degree):
        if degree < self.degree:
            raise ParameterError(f"Cannot pad a degree {self.degree} polynomial down to {degree}.")
        extra = degree - self.degree
        return TrigPoly(np.pad(self.coeffs, extra))

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other)
        degree = max(self.degree, other.degree)
        return TrigPoly(self.padded(degree).coeffs + other.padded(degree).coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        return TrigPoly(self.coeffs * scalar)

    __rmul__ = __mul__

    def shift(self, s):
        """theta -> p(theta + s)."""
        return TrigPoly(self.coeffs * np.exp(1j * self.frequencies * s))

    def mul_sin(self):
        """p(theta) sin(theta): c'_k = (c_{k-1} - c_{k+1}) / (2i)."""
        c = np.pad(self.coeffs, 1)
        out = np.zeros_like(c)
        out[1:] += c[:-1]
        out[:-1] -= c[1:]
        return TrigPoly(out / 2j)

    def mul_cos(self):
        """p(theta) cos(theta): c'_k = (c_{k-1} + c_{k+1}) / 2."""
        c = np.pad(self.coeffs, 1)
        out = np.zeros_like(c)
        out[1:] += c[:-1]
        out[:-1] += c[1:]
        return TrigPoly(out / 2)

    def odd_part(self):
        return TrigPoly((self.coeffs - self.coeffs[::-1]) / 2)

    def even_part(self):
        return TrigPoly((self.coeffs + self.coeffs[::-1]) / 2)


def eval_trig(p, theta):
    """
    Evaluate a real-valued trigonometric polynomial.

    Args:
        p (TrigPoly): Polynomial with c_{-k} = conj(c_k).
        theta (float or np.ndarray): Points in radians.

    Returns:
        float or np.ndarray: Real values of p.

    Raises:
        CorruptedCoefficientsError: If the imaginary residue exceeds 1e-12 (relative to sum |c_k|).
    """
    values = p(theta)
    scale = max(1.0, float(np.sum(np.abs(p.coeffs))))
    residue = float(np.max(np.abs(np.imag(values)), initial=0.0))
    if residue > IMAG_RESIDUE_TOL * scale:
        raise CorruptedCoefficientsError(
            f"Imaginary residue {residue:.3e} exceeds {IMAG_RESIDUE_TOL:g}; coefficients are not Hermitian.")
    real = np.real(values)
    return float(real) if real.ndim == 0 else real

###############################################################################################################
# Periodic functions

def wrap(theta):
    """Reduce angles to [0, 2pi)."""
    reduced = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    return np.where(reduced >= TWO_PI, 0.0, reduced)


def _normalize_breakpoints(points):
    if not points:
        return ()
    reduced = sorted({round(float(wrap(point)), 15) for point in points})
    # 2pi - tiny and 0 are the same point on the circle
    return tuple(0.0 if TWO_PI - point < 1e-14 else point for point in reduced)


@dataclasses.dataclass(frozen=True, eq=False)
class PeriodicFn:
    """
    A 2pi-periodic real function.

    Attributes:
        evaluator (Callable): Vectorized map from angles in [0, 2pi) to real values. At a jump it
            must return the midpoint of the one-sided limits.
        breakpoints (tuple): Jump and kink locations.
        fourier_coef (Callable, optional): Closed-form k -> f^(k).
        name (str): Label for logs and reports.
    """
    evaluator: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple = ()
    fourier_coef: Optional[Callable[[int], complex]] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", _normalize_breakpoints(self.breakpoints))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        values = np.asarray(self.evaluator(wrap(theta)), dtype=float)
        return float(values) if values.ndim == 0 else values


def trig_poly_fn(p, name="poly"):
    """View a real TrigPoly as a PeriodicFn."""
    return PeriodicFn(lambda theta: eval_trig(p, theta), (), p.coeff, name)


def difference(f, p, name=None):
    """The PeriodicFn f - p for a real TrigPoly p."""
    coef = None
    if f.fourier_coef is not None:
        coef = lambda k: f.fourier_coef(k) - p.coeff(k)
    return PeriodicFn(lambda theta: f(theta) - eval_trig(p, theta), f.breakpoints, coef,
                      name or f"{f.name}-poly")


def shifted(f, s, name=None):
    """theta -> f(theta + s), with breakpoints moved to b - s."""
    coef = None
    if f.fourier_coef is not None:
        coef = lambda k: f.fourier_coef(k) * complex(np.exp(1j * k * s))
    return PeriodicFn(lambda theta: f(theta + s), tuple(b - s for b in f.breakpoints), coef,
                      name or f"{f.name}(.+{s:g})")

###############################################################################################################
# Quadrature helpers

def _check_power_of_two(samples, what="samples"):
    if samples < 1 or samples & (samples - 1):
        raise AliasingError(f"Number of {what} must be a power of two, got {samples}.")


def is_on_grid(point, samples):
    position = point * samples / TWO_PI
    return abs(position - round(position)) < GRID_ALIGN_TOL


def _pieces(breakpoints):
    """Arcs between consecutive breakpoints, as (a, b) with a < b <= a + 2pi."""
    if not breakpoints:
        return [(0.0, TWO_PI)]
    points = list(breakpoints)
    ends = points[1:] + [points[0] + TWO_PI]
    return [(a, b) for a, b in zip(points, ends) if b - a > 0]


def gauss_nodes(segments, order, width):
    """
    Composite Gauss-Legendre nodes and weights on a list of segments.

    Args:
        segments (list): (a, b) intervals.
        order (int): Nodes per panel.
        width (float): Maximum panel width.

    Returns:
        tuple: (nodes, weights) as flat arrays; weights integrate with respect to d theta.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in segments:
        panels = max(1, int(math.ceil((b - a) / width)))
        edges = np.linspace(a, b, panels + 1)
        half = np.diff(edges) / 2
        mid = (edges[:-1] + edges[1:]) / 2
        nodes.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
        weights.append((half[:, None] * w[None, :]).ravel())
    if not nodes:
        return np.empty(0), np.empty(0)
    return np.concatenate(nodes), np.concatenate(weights)

###############################################################################################################
# Fourier coefficients, L1 norms, convolution

def fourier_coeffs(f, max_k, samples=None, method=None):
    """
    Estimate f^(k) for |k| <= max_k.

    When f has no breakpoints, or all of them lie on the uniform grid of `samples` points,
    the trapezoid rule is used through the FFT (exact for trigonometric polynomials of degree
    below samples/2). Otherwise the circle is split at the breakpoints and each smooth arc is
    integrated with composite Gauss-Legendre panels using about `samples` nodes in total.

    Args:
        f (PeriodicFn): The function.
        max_k (int): Largest frequency.
        samples (int, optional): Power of two, at least 8*max_k. Defaults to the configured quad_grid.
        method (str, optional): 'trapezoid' or 'gauss' to force a route; chosen as above when None.

    Returns:
        dict: Map k -> complex coefficient.

    Raises:
        AliasingError: If samples is not a power of two or is below 8*max_k.
        ParameterError: On an unknown method.
    """
    samples = samples or settings().quad_grid
    _check_power_of_two(samples)
    if samples < 8 * max_k:
        raise AliasingError(f"{samples} samples are too few for frequencies up to {max_k}; need >= {8 * max_k}.")
    if method not in (None, "trapezoid", "gauss"):
        raise ParameterError(f"Unknown quadrature method {method!r}.")

    ks = np.arange(-max_k, max_k + 1)
    if method is None:
        method = "trapezoid" if all(is_on_grid(point, samples) for point in f.breakpoints) else "gauss"
    if method == "trapezoid":
        theta = TWO_PI * np.arange(samples) / samples
        spectrum = np.fft.fft(f(theta)) / samples
        values = spectrum[np.mod(ks, samples)]
        logger.debug("Trapezoid coefficients of %s with %d samples", f.name, samples)
    else:
        cfg = settings()
        order = cfg.gauss_order
        width = min(cfg.panel_width, TWO_PI * order / samples)
        nodes, weights = gauss_nodes(_pieces(f.breakpoints), order, width)
        weighted = f(nodes) * weights / TWO_PI
        values = np.exp(-1j * np.multiply.outer(ks, nodes)) @ weighted
        logger.debug("Gauss-Legendre coefficients of %s on %d nodes", f.name, nodes.size)
    return {int(k): complex(v) for k, v in zip(ks, values)}


def _root(f, lo, hi, xtol, maxiter):
    scalar = lambda t: float(f(np.array([t]))[0])
    # bisect sees scalar values, which may round differently from the vectorized scan
    f_lo, f_hi = scalar(lo), scalar(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        logger.debug("No sign change of %s on [%.6g, %.6g] after rescan; skipped", f.name, lo, hi)
        return None
    try:
        return bisect(scalar, lo, hi, xtol=xtol, maxiter=maxiter)
    except (RuntimeError, ValueError) as error:
        raise QuadratureError(f"Sign-change refinement of {f.name} on [{lo:.6g}, {hi:.6g}] "
                              f"did not converge in {maxiter} steps.") from error


def sign_changes(f, a, b, samples, xtol=None, maxiter=None, floor=0.0):
    """
    Locate sign changes of f inside (a, b).

    Args:
        f (PeriodicFn): Function, smooth on (a, b).
        a (float), b (float): Arc ends.
        samples (int): Number of sub-intervals used for detection.
        floor (float): Sampled values with |f| <= floor count as zeros.

    Returns:
        list: Roots in increasing order.
    """
    cfg = settings()
    xtol = xtol or cfg.bisect_xtol
    maxiter = maxiter or cfg.bisect_maxiter
    xs = np.linspace(a, b, samples + 1)
    nudge = 1e-12 * max(1.0, b - a)
    xs[0] += nudge
    xs[-1] -= nudge
    values = f(xs)
    signs = np.where(np.abs(values) <= floor, 0.0, np.sign(values))
    nonzero = np.flatnonzero(signs)
    roots = []
    for left, right in zip(nonzero[:-1], nonzero[1:]):
        if signs[left] != signs[right]:
            root = _root(f, xs[left], xs[right], xtol, maxiter)
            if root is not None:
                roots.append(root)
    return roots


def l1_norm(f, grid=None, refine=False):
    """
    (1/2pi) int |f|.

    Args:
        f (PeriodicFn): Real function.
        grid (int, optional): Base grid, a power of two >= 2**10. Defaults to quad_grid.
        refine (bool): Split the integral at breakpoints and at sign changes located by bisection,
            then integrate each constant-sign arc with Gauss-Legendre panels.

    Returns:
        tuple: (value, err_estimate).

    Raises:
        AliasingError: If the grid is not a power of two or is below 2**10.
        QuadratureError: If a sign change cannot be refined.
    """
    cfg = settings()
    grid = grid or cfg.quad_grid
    _check_power_of_two(grid, "grid points")
    if grid < 2 ** 10:
        raise AliasingError(f"L1 quadrature needs at least 1024 grid points, got {grid}.")

    if not refine:
        theta = TWO_PI * np.arange(grid) / grid
        absolute = np.abs(f(theta))
        value = float(np.mean(absolute))
        return value, abs(value - float(np.mean(absolute[::2])))

    # roundoff-level values do not count as sign changes
    peak = float(np.max(np.abs(f(TWO_PI * np.arange(grid) / grid))))
    floor = max(SIGN_NOISE * peak, EVAL_NOISE_FACTOR * cfg.eval_tol)
    segments = []
    for a, b in _pieces(f.breakpoints):
        detect = max(8, int(math.ceil(grid * (b - a) / TWO_PI)))
        cuts = [a] + sign_changes(f, a, b, detect, cfg.bisect_xtol, cfg.bisect_maxiter, floor) + [b]
        segments.extend((left, right) for left, right in zip(cuts[:-1], cuts[1:]) if right > left)

    fine_nodes, fine_weights = gauss_nodes(segments, cfg.gauss_order, cfg.panel_width)
    coarse_nodes, coarse_weights = gauss_nodes(segments, cfg.gauss_order // 2, cfg.panel_width)
    fine = float(np.abs(f(fine_nodes)) @ fine_weights) / TWO_PI
    coarse = float(np.abs(f(coarse_nodes)) @ coarse_weights) / TWO_PI
    logger.debug("Refined L1 norm of %s over %d arcs: %.15g", f.name, len(segments), fine)
    return fine, abs(fine - coarse)


def convolve_poly(h, p, samples=None):
    """
    Convolution h * p of a bounded function with a trigonometric polynomial.

    Args:
        h (PeriodicFn or Mapping): The function, or its precomputed coefficients k -> h^(k).
        p (TrigPoly): The polynomial.
        samples (int, optional): Samples for fourier_coeffs when h has no closed-form coefficients.

    Returns:
        TrigPoly: Coefficients h^(k) p^(k), same degree as p.

    Raises:
        InsufficientSamplingError: If a coefficient h^(k), |k| <= deg p, is unavailable.
    """
    degree = p.degree
    if isinstance(h, PeriodicFn):
        if h.fourier_coef is not None:
            h_hat = {k: h.fourier_coef(k) for k in range(-degree, degree + 1)}
        else:
            samples = samples or max(settings().quad_grid, 8 * degree)
            h_hat = fourier_coeffs(h, degree, 1 << (samples - 1).bit_length())
    elif isinstance(h, Mapping):
        h_hat = h
    else:
        raise ParameterError(f"Cannot convolve with object of type {type(h).__name__}.")

    missing = [k for k in range(-degree, degree + 1) if k not in h_hat]
    if missing:
        raise InsufficientSamplingError(
            f"Coefficients h^(k) missing for k in {missing[:5]}{'...' if len(missing) > 5 else ''}.")
    return TrigPoly(np.array([h_hat[k] for k in range(-degree, degree + 1)]) * p.coeffs)


def circular_convolution(h_values, k_values):
    """Grid convolution (1/M) sum_l h(theta_l) K(theta_j - theta_l), computed with the FFT."""
    h_values = np.asarray(h_values, dtype=float)
    k_values = np.asarray(k_values, dtype=float)
    return np.real(np.fft.ifft(np.fft.fft(h_values) * np.fft.fft(k_values))) / h_values.size
