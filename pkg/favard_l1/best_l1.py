"""
Best L1 approximation of kernels by trigonometric polynomials of degree n-1.

Upper bounds come from an explicit candidate polynomial (interpolation at the zeros of the
parity-matched sign pattern) and an L1 quadrature of the error. Lower bounds come from
duality: for sigma = +/- sgn sin(n theta) or +/- sgn cos(n theta), which has unit sup norm
and annihilates T_{n-1},

    E_{n-1}(K)_1 >= |(1/2pi) int K conj(sigma)| = |sum_k K^(k) conj(sigma^(k))|.

The pairing is computed without quadrature, either from the closed-form Fourier
coefficients (summed with mpmath.nsum) or from an exact primitive of K - K^(0).
"""
import dataclasses
import enum
import logging
import math
from typing import Optional

import mpmath
import numpy as np

from .config import settings
from .exceptions import (CertificationError, InterpolationError, ParameterError,
                         SeriesConvergenceError)
from .favard import favard_exact
from .fourier_core import TWO_PI, TrigPoly, difference, eval_trig, l1_norm
from .kernels import (KernelKind, Parity, bernoulli_kernel, check_steklov, quasi_kernel, steklov_kernel,
                      steklov_terms)

logger = logging.getLogger(__name__)

SPLIT_TERMS = 16

###############################################################################################################
# Sign patterns

class SignKind(enum.Enum):
    SIN_N = "SinN"
    COS_N = "CosN"


@dataclasses.dataclass(frozen=True)
class SignPattern:
    """
    sigma(theta) = s * sgn sin(n theta) or s * sgn cos(n theta), with s = -1 when flipped.

    Attributes:
        kind (SignKind): Sine or cosine pattern.
        n (int): Frequency, n >= 1.
        flip (bool): Whether the pattern is negated.
    """
    kind: SignKind
    n: int
    flip: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"Sign pattern frequency must be an integer >= 1, got {self.n}.")

    @property
    def sign(self):
        return -1 if self.flip else 1

    def flipped(self):
        return dataclasses.replace(self, flip=not self.flip)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        base = np.sin(self.n * theta) if self.kind is SignKind.SIN_N else np.cos(self.n * theta)
        return self.sign * np.sign(base)

    def coef(self, k):
        """Fourier coefficient at frequency k."""
        k = int(k)
        if k % self.n:
            return 0j
        j = k // self.n
        if j % 2 == 0:
            return 0j
        if self.kind is SignKind.SIN_N:
            return complex(self.sign * 2 / (math.pi * 1j * j))
        return complex(self.sign * (2 / math.pi) * (-1) ** ((abs(j) - 1) // 2) / abs(j))

    def mp_coef(self, k):
        """Same as coef, in mpmath arithmetic at the current working precision."""
        j = int(k) // self.n
        if self.kind is SignKind.SIN_N:
            return self.sign * 2 / (mpmath.pi * mpmath.mpc(0, j))
        return self.sign * 2 / mpmath.pi * (-1) ** ((abs(j) - 1) // 2) / abs(j)

    def zeros(self):
        """Sign changes in one period, starting at 0 (SinN) or pi/(2n) (CosN)."""
        offset = 0.0 if self.kind is SignKind.SIN_N else 0.5
        return [(j + offset) * math.pi / self.n for j in range(2 * self.n)]

    def intervals(self):
        """(a, b, sign) arcs covering one period, on which the pattern is constant."""
        zeros = self.zeros()
        ends = zeros[1:] + [zeros[0] + TWO_PI]
        first = 1 if self.kind is SignKind.SIN_N else -1
        return [(a, b, self.sign * first * (-1) ** j) for j, (a, b) in enumerate(zip(zeros, ends))]

    def pair_with_poly(self, p):
        """(1/2pi) int p conj(sigma) computed from the coefficient supports."""
        return sum(c * np.conj(self.coef(k)) for k, c in p.as_map().items())

    def annihilates(self, p, tol=1e-10):
        return abs(self.pair_with_poly(p)) <= tol


def pattern_for(kernel, n, flip=False):
    """The sine pattern for odd kernels, the cosine pattern for even ones."""
    if kernel.parity is Parity.ODD:
        return SignPattern(SignKind.SIN_N, n, flip)
    if kernel.parity is Parity.EVEN:
        return SignPattern(SignKind.COS_N, n, flip)
    raise InterpolationError(f"Kernel {kernel.name} has no parity; no sign pattern applies.")

###############################################################################################################
# Pairings

def _mp_kernel_coef(kernel, k):
    if kernel.kind is KernelKind.BERNOULLI:
        return 1 / mpmath.mpc(0, k) ** kernel.r
    if kernel.kind is KernelKind.QUASI_K1:
        if abs(k) == 1:
            return k / mpmath.mpc(0, 4)
        return k / mpmath.mpc(0, k * k - 1)
    if kernel.kind is KernelKind.QUASI_K2:
        if abs(k) == 1:
            return mpmath.mpf(1) / 4
        return -1 / mpmath.mpf(k * k - 1)
    if kernel.kind is KernelKind.STEKLOV:
        x = mpmath.pi * mpmath.mpf(kernel.h) * k
        return (mpmath.sin(x) / x) ** kernel.m
    return mpmath.mpmathify(kernel.fourier_coef(k))


def _series_pairing(kernel, pattern, tol, dps):
    n = pattern.n

    def term(j):
        k = (2 * int(j) + 1) * n
        # the -k term is the complex conjugate of the +k term
        return 2 * mpmath.re(_mp_kernel_coef(kernel, k) * mpmath.conj(pattern.mp_coef(k)))

    # nsum returns no error estimate; the spread against a run that sums the first SPLIT_TERMS terms
    # directly stands in for one
    with mpmath.workdps(dps):
        value = mpmath.nsum(term, [0, mpmath.inf])
        head = mpmath.fsum(term(j) for j in range(SPLIT_TERMS))
        shifted = head + mpmath.nsum(term, [SPLIT_TERMS, mpmath.inf])
        value, error = float(value), float(abs(value - shifted))
    logger.debug("Pairing series %s with %s%d: %.17g, estimate %.3e", kernel.name, pattern.kind.value, n, value,
                 error)
    if not math.isfinite(value) or error > tol:
        raise SeriesConvergenceError(
            f"Pairing series of {kernel.name} with {pattern.kind.value}{n} has error estimate "
            f"{error:.3e} above {tol:.3e}.")
    return value, error


def _primitive_pairing(kernel, pattern):
    if kernel.primitive is None:
        raise ParameterError(f"Kernel {kernel.name} has no primitive; use the series route.")
    arcs = pattern.intervals()
    starts = np.array([a for a, _, _ in arcs])
    ends = np.array([b for _, b, _ in arcs])
    signs = np.array([s for _, _, s in arcs], dtype=float)
    increments = np.asarray(kernel.primitive(ends), dtype=float) - np.asarray(kernel.primitive(starts), dtype=float)
    value = float(signs @ increments) / TWO_PI
    error = 64 * np.finfo(float).eps * float(np.sum(np.abs(increments)) + 1.0)
    return value, error


def pairing(kernel, pattern, method=None, tol=None):
    """
    Signed pairing (1/2pi) int K conj(sigma).

    Args:
        kernel (KernelSpec): Kernel with closed-form coefficients.
        pattern (SignPattern): Dual function.
        method (str, optional): "series" or "primitive". Defaults to "primitive" for Steklov
            kernels, whose coefficient series oscillates, and "series" otherwise.
        tol (float, optional): Tail tolerance of the series route. Defaults to dual_tol.

    Returns:
        tuple: (value, err_estimate).

    Raises:
        SeriesConvergenceError: If the series error estimate exceeds tol.
    """
    cfg = settings()
    tol = tol or cfg.dual_tol
    method = method or ("primitive" if kernel.kind is KernelKind.STEKLOV else "series")
    if method == "series":
        return _series_pairing(kernel, pattern, tol, cfg.dual_dps)
    if method == "primitive":
        return _primitive_pairing(kernel, pattern)
    raise ParameterError(f"Unknown pairing method {method!r}; expected 'series' or 'primitive'.")


def matched_pattern(kernel, n, method=None, tol=None):
    """
    Parity-matched pattern, flipped so that the signed pairing is nonnegative.

    Returns:
        tuple: (pattern, |pairing|, err_estimate).
    """
    pattern = pattern_for(kernel, n)
    value, error = pairing(kernel, pattern, method, tol)
    if value < 0:
        pattern, value = pattern.flipped(), -value
    return pattern, value, error


def dual_lower(kernel, n, pattern=None, tol=None, method=None):
    """
    Duality lower bound e_n(K) = |(1/2pi) int K conj(sigma)|.

    Args:
        kernel (KernelSpec): The kernel.
        n (int): Pattern frequency; bounds E_{n-1}(K)_1.
        pattern (SignPattern, optional): Dual function; defaults to the parity-matched one.
        tol (float, optional): Series tail tolerance.
        method (str, optional): Pairing route, see pairing.

    Returns:
        float: The lower bound.
    """
    if pattern is None:
        pattern = pattern_for(kernel, n)
    elif pattern.n != n:
        raise ParameterError(f"Pattern frequency {pattern.n} does not match n = {n}.")
    value, _ = pairing(kernel, pattern, method, tol)
    return abs(value)

###############################################################################################################
# Candidates

def closed_form_value(kernel, n):
    """
    Known value of E_{n-1}(K)_1, or None when no closed form applies.

    Args:
        kernel (KernelSpec): The kernel.
        n (int): Degree plus one.

    Returns:
        float or None: tan(pi/2n) for K1, sec(pi/2n) - 1 for K2, K_r/n^r for B_r.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}.")
    if kernel.kind is KernelKind.BERNOULLI:
        return favard_exact(kernel.r).value / n ** kernel.r
    if kernel.kind in (KernelKind.QUASI_K1, KernelKind.QUASI_K2):
        if n < 2:
            raise ParameterError(f"Closed forms for {kernel.name} need n >= 2, got {n}.")
        x = math.pi / (2 * n)
        return math.tan(x) if kernel.kind is KernelKind.QUASI_K1 else 1.0 / math.cos(x) - 1.0
    return None


def interpolation_nodes(parity, n):
    """k pi/n, k = 1..n-1, for odd kernels; (2k+1) pi/(2n), k = 0..n-1, for even ones."""
    if parity is Parity.ODD:
        return np.arange(1, n) * math.pi / n
    if parity is Parity.EVEN:
        return (2 * np.arange(n) + 1) * math.pi / (2 * n)
    raise InterpolationError("Interpolation nodes need an odd or even kernel.")


def best_poly_candidate(kernel, n):
    """
    Interpolating polynomial of degree n-1 at the zeros of the matched sign pattern.

    Args:
        kernel (KernelSpec): Odd or even kernel.
        n (int): Degree plus one, n >= 1.

    Returns:
        TrigPoly: Sine polynomial for odd kernels, cosine polynomial for even ones.

    Raises:
        InterpolationError: If the kernel has no parity or the system is singular.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}.")
    nodes = interpolation_nodes(kernel.parity, n)
    if kernel.parity is Parity.ODD:
        if n == 1:
            return TrigPoly.zeros()
        matrix = np.sin(np.outer(nodes, np.arange(1, n)))
    else:
        matrix = np.cos(np.outer(nodes, np.arange(n)))
    values = np.asarray(kernel.eval(nodes), dtype=float)
    if np.linalg.cond(matrix) > 1e12:
        raise InterpolationError(f"Interpolation system for {kernel.name}, n={n} is singular.")
    try:
        solution = np.linalg.solve(matrix, values)
    except np.linalg.LinAlgError as error:
        raise InterpolationError(f"Interpolation system for {kernel.name}, n={n} is singular.") from error
    if kernel.parity is Parity.ODD:
        return TrigPoly.from_sine(solution)
    return TrigPoly.from_cosine(solution)


def sign_agreement(kernel, candidate, pattern, grid=None):
    """
    Whether sgn(K - tau) equals the pattern on a grid shifted half a cell off the nodes.

    Points where K - tau vanishes to roundoff are skipped.
    """
    grid = grid or settings().quad_grid
    theta = TWO_PI * (np.arange(grid) + 0.5) / grid
    residual = np.asarray(kernel.eval(theta), dtype=float) - eval_trig(candidate, theta)
    scale = max(1.0, float(np.max(np.abs(residual), initial=0.0)))
    visible = np.abs(residual) > 1e-13 * scale
    return bool(np.all(np.sign(residual[visible]) == pattern(theta[visible])))

###############################################################################################################
# Certificates

@dataclasses.dataclass(frozen=True, eq=False)
class Certificate:
    """
    Sandwich lower <= E_{n-1}(K)_1 <= upper.

    Attributes:
        kernel (KernelSpec): The kernel.
        n (int): Degree plus one.
        lower (float): Duality bound.
        upper (float): L1 error of the candidate.
        candidate (TrigPoly): Polynomial of degree <= n-1.
        closed_form (float, optional): Known exact value.
        pattern (SignPattern): Dual function used for the lower bound.
        upper_err (float): Quadrature error estimate.
        lower_err (float): Pairing error estimate.
        sign_ok (bool): Whether the error has the sign of the pattern.
    """
    kernel: object
    n: int
    lower: float
    upper: float
    candidate: TrigPoly
    closed_form: Optional[float] = None
    pattern: Optional[SignPattern] = None
    upper_err: float = 0.0
    lower_err: float = 0.0
    sign_ok: bool = True

    @property
    def gap(self):
        return self.upper - self.lower

    def passed(self, tol):
        return self.gap <= tol and self.gap >= -1e-10


def certify(kernel, n, tol=None, strict=True, grid=None, candidate=None, method=None):
    """
    Certify the best-approximation value of a kernel.

    Args:
        kernel (KernelSpec): The kernel.
        n (int): Degree plus one, n >= 2.
        tol (float, optional): Allowed gap. Defaults to certify_tol.
        strict (bool): Raise when the gap exceeds tol; otherwise log a warning.
        grid (int, optional): Base grid of the L1 quadrature.
        candidate (TrigPoly, optional): Replaces the interpolating candidate.
        method (str, optional): Pairing route.

    Returns:
        Certificate: Both bounds and the candidate.

    Raises:
        CertificationError: If strict and upper - lower > tol.
    """
    if n < 2:
        raise ParameterError(f"Certificates need n >= 2, got {n}.")
    tol = tol or settings().certify_tol
    if candidate is None:
        candidate = best_poly_candidate(kernel, n)
    if candidate.degree > n - 1:
        raise ParameterError(f"Candidate degree {candidate.degree} exceeds n-1 = {n - 1}.")
    pattern, lower, lower_err = matched_pattern(kernel, n, method)
    upper, upper_err = l1_norm(difference(kernel.as_periodic(), candidate), grid, refine=True)
    closed = closed_form_value(kernel, n)
    sign_ok = sign_agreement(kernel, candidate, pattern, grid)
    certificate = Certificate(kernel, n, lower, upper, candidate, closed, pattern, upper_err, lower_err, sign_ok)
    logger.info("%s n=%d: lower=%.15g upper=%.15g gap=%.3e", kernel.name, n, lower, upper, certificate.gap)
    if not sign_ok:
        logger.warning("%s n=%d: error sign does not follow the %s pattern", kernel.name, n, pattern.kind.value)
    if not certificate.passed(tol):
        message = (f"Certificate for {kernel.name}, n={n} failed: lower={lower:.15g}, upper={upper:.15g}, "
                   f"gap={certificate.gap:.3e} > {tol:.3e}.")
        if strict:
            raise CertificationError(message, certificate)
        logger.warning(message)
    return certificate

###############################################################################################################
# Steklov kernels

class Regime(enum.Enum):
    FLAT = "FLAT"
    EXACT = "EXACT"
    BOUND = "BOUND"


@dataclasses.dataclass(frozen=True, eq=False)
class SteklovResult:
    m: int
    h: float
    n: int
    regime: Regime
    value: float
    certified: bool
    certificate: Optional[Certificate] = None


def steklov_regime(m, h, n):
    """EXACT when 2nh is an odd integer at most 2n-1, else FLAT when h <= 1/(2mn), else BOUND."""
    m, h = check_steklov(m, h)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}.")
    scaled = 2 * n * h
    nearest = round(scaled)
    if abs(scaled - nearest) < 1e-12 and nearest % 2 == 1 and nearest <= 2 * n - 1:
        return Regime.EXACT
    if h <= 1.0 / (2 * m * n) + 1e-15:
        return Regime.FLAT
    return Regime.BOUND


def steklov_bound_value(m, h, n):
    """K_m / (pi h n)^m."""
    return favard_exact(m).value / (math.pi * h * n) ** m


def steklov_candidate(m, h, n):
    """
    1 + (2 pi h)^(-m) sum_p (-1)^(m-p) C(m, p) tau_{n-1}(B_m)(theta + (2p - m) pi h).

    Its L1 distance to the Steklov kernel is at most K_m/(pi h n)^m.
    """
    m, h = check_steklov(m, h)
    tau = best_poly_candidate(bernoulli_kernel(m), n)
    weights, shifts = steklov_terms(m, h)
    total = TrigPoly.zeros(tau.degree)
    for weight, shift in zip(weights, shifts):
        total = total + weight * tau.shift(shift)
    return TrigPoly.constant(1.0) + total * (TWO_PI * h) ** -m


def steklov_best(m, h, n, tol=None, grid=None):
    """
    Best L1 approximation of a Steklov kernel by T_{n-1}, by regime.

    Args:
        m (int): Order.
        h (float): Width, 0 < h <= 1 and m*h < 1.
        n (int): Degree plus one, n >= 1.
        tol (float, optional): Allowed certificate gap.
        grid (int, optional): Base grid of the L1 quadrature.

    Returns:
        SteklovResult: Regime, value (exact value or upper bound) and the numerical certificate.
    """
    tol = tol or settings().certify_tol
    regime = steklov_regime(m, h, n)
    kernel = steklov_kernel(m, h)
    if regime is Regime.FLAT:
        candidate, value = TrigPoly.zeros(), 1.0
    else:
        candidate, value = steklov_candidate(m, h, n), steklov_bound_value(m, h, n)

    pattern, lower, lower_err = matched_pattern(kernel, n)
    upper, upper_err = l1_norm(difference(kernel.as_periodic(), candidate), grid, refine=True)
    certificate = Certificate(kernel, n, lower, upper, candidate, None if regime is Regime.BOUND else value,
                              pattern, upper_err, lower_err, True)
    certified = regime is not Regime.BOUND and certificate.passed(tol) and abs(lower - value) <= tol
    if regime is not Regime.BOUND and not certified:
        logger.warning("Steklov m=%d h=%g n=%d: %s regime not certified (lower=%.15g upper=%.15g)",
                       m, h, n, regime.value, lower, upper)
    logger.info("Steklov m=%d h=%g n=%d: %s value=%.15g", m, h, n, regime.value, value)
    return SteklovResult(m, h, n, regime, value, certified, certificate)

###############################################################################################################
# Quasi-Bernoulli kernels through Bernoulli series

def quasi_tau_truncation_bound(which, n, R):
    """
    Coefficient error of quasi_tau_series: sum over omitted orders q of K_q/n^q + 6 * 2^-q.

    K_q <= pi/2 for every q >= 1, which sums the tail as two geometric series.
    """
    first = 2 * R + 3 if which.upper() == "K1" else 2 * R + 2
    kernel_part = (math.pi / 2) * float(n) ** -first / (1 - float(n) ** -2)
    partial_sum_part = 6 * 2.0 ** -first / (1 - 0.25)
    return kernel_part + partial_sum_part


def quasi_tau_series(which, n, R):
    """
    tau_{n-1}(K1) = sin/2 + sum_{r=0}^{R} ((-1)^r tau_{n-1}(B_{2r+1}) - 2 sin), and
    tau_{n-1}(K2) = 1 + cos/2 + sum_{r=1}^{R} ((-1)^(r+1) tau_{n-1}(B_{2r}) + 2 cos).

    Args:
        which (str): "K1" or "K2".
        n (int): Degree plus one, n >= 2.
        R (int): Last series index, R >= 1.

    Returns:
        TrigPoly: Truncated polynomial of degree n-1.
    """
    which = which.upper()
    if which not in ("K1", "K2"):
        raise ParameterError(f"Quasi-Bernoulli kernel must be K1 or K2, got {which!r}.")
    if n < 2 or R < 1:
        raise ParameterError(f"quasi_tau_series needs n >= 2 and R >= 1, got n={n}, R={R}.")
    degree = n - 1
    if which == "K1":
        if 2 * R + 1 > 64:
            raise ParameterError(f"R = {R} needs Bernoulli orders above 64.")
        sine = TrigPoly.from_sine([1.0]).padded(degree)
        total = 0.5 * sine
        for r in range(R + 1):
            total = total + (-1) ** r * best_poly_candidate(bernoulli_kernel(2 * r + 1), n).padded(degree) - 2 * sine
    else:
        if 2 * R > 64:
            raise ParameterError(f"R = {R} needs Bernoulli orders above 64.")
        cosine = TrigPoly.from_cosine([0.0, 1.0]).padded(degree)
        total = TrigPoly.constant(1.0, degree) + 0.5 * cosine
        for r in range(1, R + 1):
            term = best_poly_candidate(bernoulli_kernel(2 * r), n).padded(degree)
            total = total + (-1) ** (r + 1) * term + 2 * cosine
    logger.debug("quasi_tau_series %s n=%d R=%d, bound %.3e", which, n, R, quasi_tau_truncation_bound(which, n, R))
    return total

###############################################################################################################
# Asymptotics and duality inequalities

def asymptotic_factor_check(n):
    """
    n tan(pi/2n) and n^2 (sec(pi/2n) - 1), which tend to K_1 and K_2.

    Returns:
        dict: Both scaled factors and their distances to the limits.
    """
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}.")
    x = math.pi / (2 * n)
    scaled_t = n * math.tan(x)
    scaled_s = n * n * (1.0 / math.cos(x) - 1.0)
    return {
        "n": n,
        "n_T": scaled_t,
        "n2_S": scaled_s,
        "T_error": abs(scaled_t - favard_exact(1).value),
        "S_error": abs(scaled_s - favard_exact(2).value),
    }


def quasi_lower_margin(which, n):
    """
    e_n(K1) - (K_1/n + K_3/n^3) or e_n(K2) - (K_2/n^2 + K_4/n^4); positive for n >= 2.
    """
    which = which.upper()
    lower = dual_lower(quasi_kernel(which), n)
    if which == "K1":
        return lower - (favard_exact(1).value / n + favard_exact(3).value / n ** 3)
    return lower - (favard_exact(2).value / n ** 2 + favard_exact(4).value / n ** 4)
