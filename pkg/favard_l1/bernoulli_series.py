"""
Bernoulli series of kernels with analytic coefficient tails.

If K^(k) = g(k) for |k| > N, where g is analytic on |z| > N with a zero at infinity, then

    K(theta) = T_N(theta) + sum_{m>=1} c_m (B_m(theta) - S_N(B_m, theta)),
    c_m = (1/2pi i) int_C (i zeta)^m g(zeta) d zeta / zeta,

with T_N = S_N(K) and C the circle |zeta| = N + 1/2. The coefficients c_m are computed either
by the trapezoid rule on C (through one inverse FFT) or exactly from the poles of g.
"""
import dataclasses
import logging
import math
from typing import Callable, Mapping, Optional

import numpy as np

from .config import settings
from .exceptions import ParameterError, SeriesConvergenceError
from .fourier_core import TWO_PI, TrigPoly, eval_trig
from .kernels import MAX_BERNOULLI_ORDER, bernoulli_eval, bernoulli_partial_sum, quasi_eval, quasi_kernel

logger = logging.getLogger(__name__)

UNIFORM_CONSTANT = 6.0

###############################################################################################################
# Tails

@dataclasses.dataclass(frozen=True)
class RationalTail:
    """
    g(z) = sum_p rho_p / (z - p) + sum_q a_q / (i z)^q.

    Attributes:
        poles (tuple): Simple poles as (p, rho) pairs, p != 0.
        laurent (Mapping): Finite Laurent part at the origin, q -> a_q with q >= 1.
    """
    poles: tuple = ()
    laurent: Mapping = dataclasses.field(default_factory=dict)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        values = np.zeros_like(z)
        for p, rho in self.poles:
            values = values + rho / (z - p)
        for q, a in self.laurent.items():
            values = values + a / (1j * z) ** q
        return values


@dataclasses.dataclass(frozen=True, eq=False)
class AnalyticTail:
    """
    Analytic continuation g of the Fourier coefficients of a kernel beyond |k| = N.

    Attributes:
        N (int): The tail starts at |k| = N + 1.
        g (Callable): Vectorized complex evaluator.
        rational (RationalTail, optional): Pole form, enables residue_coeffs.
        name (str): Label.
    """
    N: int
    g: Callable
    rational: Optional[RationalTail] = None
    name: str = ""

    @property
    def radius(self):
        return self.N + 0.5

    def decay(self, radii=(1e3, 1e6), samples=64):
        """Max |g| on circles of the given radii."""
        phi = TWO_PI * np.arange(samples) / samples
        return [float(np.max(np.abs(self.g(radius * np.exp(1j * phi))))) for radius in radii]

    def mismatch(self, kernel, count=64):
        """Max |g(k) - K^(k)| for N+1 <= |k| <= N+count."""
        ks = [k for j in range(self.N + 1, self.N + count + 1) for k in (j, -j)]
        values = self.g(np.array(ks, dtype=complex))
        return max(abs(complex(value) - kernel.fourier_coef(k)) for k, value in zip(ks, values))


def rational_tail(N, poles=(), laurent=None, name=""):
    rational = RationalTail(tuple(poles), dict(laurent or {}))
    return AnalyticTail(N, rational, rational, name)


def quasi_tail(which):
    """Tails of K1 (g = z/(i(z^2-1))) and K2 (g = -1/(z^2-1)), both with N = 1."""
    which = which.upper()
    if which == "K1":
        return rational_tail(1, [(1.0, 0.5 / 1j), (-1.0, 0.5 / 1j)], name="K1")
    if which == "K2":
        return rational_tail(1, [(1.0, -0.5), (-1.0, 0.5)], name="K2")
    raise ParameterError(f"Quasi-Bernoulli kernel must be K1 or K2, got {which!r}.")


def bernoulli_tail(r):
    """B_r itself: g = 1/(iz)^r with N = 0."""
    return rational_tail(0, laurent={int(r): 1.0}, name=f"B{r}")

###############################################################################################################
# Coefficients

def laurent_coeffs(tail, m_max, samples=None):
    """
    Contour coefficients c_1..c_{m_max} on |zeta| = N + 1/2.

    c_m = (i rho)^m (1/M) sum_j g(rho e^{i phi_j}) e^{i m phi_j}, evaluated at M and 2M samples;
    the difference is the error estimate.

    Args:
        tail (AnalyticTail): The tail.
        m_max (int): Last coefficient.
        samples (int, optional): M, a power of two >= 256. Defaults to contour_samples.

    Returns:
        tuple: (coeffs, errors) as complex and real arrays indexed m - 1.

    Raises:
        SeriesConvergenceError: If doubling M changes a coefficient by more than
            contour_rel_tol * max|g| * rho^m.
    """
    cfg = settings()
    samples = samples or cfg.contour_samples
    if samples < 256 or samples & (samples - 1):
        raise ParameterError(f"Contour samples must be a power of two >= 256, got {samples}.")
    if m_max < 1 or m_max >= samples // 2:
        raise ParameterError(f"m_max must lie in [1, {samples // 2}), got {m_max}.")

    rho = tail.radius
    ms = np.arange(1, m_max + 1)
    scale = (1j * rho) ** ms

    def on_circle(count):
        phi = TWO_PI * np.arange(count) / count
        values = tail.g(rho * np.exp(1j * phi))
        return np.fft.ifft(values)[ms] * scale, float(np.max(np.abs(values)))

    coarse, _ = on_circle(samples)
    fine, g_max = on_circle(2 * samples)
    errors = np.abs(fine - coarse)
    allowed = cfg.contour_rel_tol * max(g_max, 1e-300) * rho ** ms
    if np.any(errors > allowed):
        worst = int(np.argmax(errors / allowed)) + 1
        raise SeriesConvergenceError(
            f"Contour coefficients of {tail.name or 'g'} do not settle under doubling (m={worst}); "
            f"g is probably not analytic on |z| = {rho}.")
    logger.debug("Contour coefficients of %s: m_max=%d, M=%d, max error %.3e", tail.name, m_max, samples,
                 float(np.max(errors)))
    return fine, errors


def residue_coeffs(tail, m_max):
    """
    Exact coefficients from the pole form: c_m = sum_p (i p)^m rho_p / p + a_m.

    Args:
        tail (AnalyticTail): Tail with a rational form.
        m_max (int): Last coefficient.

    Returns:
        np.ndarray: Complex c_1..c_{m_max}.

    Raises:
        ParameterError: If the rational form is missing or a pole lies on or outside the contour.
    """
    if tail.rational is None:
        raise ParameterError(f"Tail {tail.name} has no rational form; use laurent_coeffs.")
    ms = np.arange(1, m_max + 1)
    coeffs = np.zeros(m_max, dtype=complex)
    for p, rho in tail.rational.poles:
        if p == 0:
            raise ParameterError("A pole at the origin belongs in the Laurent part.")
        if abs(p) >= tail.radius:
            raise ParameterError(f"Pole {p} is not inside the contour |z| = {tail.radius}.")
        coeffs += (1j * p) ** ms * rho / p
    for q, a in tail.rational.laurent.items():
        if 1 <= q <= m_max:
            coeffs[q - 1] += a
    return coeffs

###############################################################################################################
# Representation

def term_factor(N, R):
    """F with |B_m - S_N(B_m)| <= F (N+1)^-m for every m > R."""
    if R < 1:
        raise ParameterError(f"R must be >= 1, got {R}.")
    return max(UNIFORM_CONSTANT, 2.0 + 2.0 * (N + 1) / R)


def tail_bound(tail, R, g_max=None):
    """
    Bound on sup |sum_{m>R} c_m (B_m - S_N(B_m))|.

    With the pole form |c_m| (N+1)^-m <= A q^m, A = sum |rho|/|p|, q = max|p|/(N+1);
    otherwise the contour estimate |c_m| <= max|g| (N+1/2)^m gives q = (N+1/2)/(N+1).
    """
    N = tail.N
    factor = term_factor(N, R)
    if tail.rational is not None:
        poles = tail.rational.poles
        amplitude = sum(abs(rho) / abs(p) for p, rho in poles)
        ratio = max((abs(p) for p, _ in poles), default=0.0) / (N + 1)
        laurent = sum(abs(a) * (N + 1.0) ** -q for q, a in tail.rational.laurent.items() if q > R)
    else:
        if g_max is None:
            raise ParameterError("Contour tails need max|g| on the contour.")
        amplitude = g_max
        ratio = tail.radius / (N + 1)
        laurent = 0.0
    geometric = amplitude * ratio ** (R + 1) / (1 - ratio) if amplitude else 0.0
    return factor * (geometric + laurent)


@dataclasses.dataclass(frozen=True, eq=False)
class BernoulliSeriesRep:
    """
    K = T_N + sum_{m=1}^{R} c_m (B_m - S_N(B_m)) + remainder, |remainder| <= tail_bound.

    Attributes:
        N (int): Degree of T_N.
        T_N (TrigPoly): S_N(K).
        coeffs (np.ndarray): c_1..c_R.
        tail_bound (float): Bound on the remainder.
        name (str): Kernel name.
    """
    N: int
    T_N: TrigPoly
    coeffs: np.ndarray
    tail_bound: float
    name: str = ""

    @property
    def R(self):
        return len(self.coeffs)

    def fourier_coef(self, k):
        """Coefficients of the truncated representation."""
        k = int(k)
        if abs(k) <= self.N:
            return self.T_N.coeff(k)
        ms = np.arange(1, self.R + 1)
        return complex(np.sum(self.coeffs / (1j * k) ** ms))


def represent(kernel, tail, R=None, tol=None, method=None, samples=None):
    """
    Build the Bernoulli series of a kernel.

    Args:
        kernel (KernelSpec): Kernel whose coefficients give T_N.
        tail (AnalyticTail): Continuation of the coefficients beyond N.
        R (int, optional): Number of terms; chosen as the smallest with tail_bound <= tol when absent.
        tol (float, optional): Target remainder. Defaults to eval_tol.
        method (str, optional): "residue" (default when a pole form exists) or "contour".
        samples (int, optional): Contour samples.

    Returns:
        BernoulliSeriesRep: The representation.
    """
    tol = tol or settings().eval_tol
    method = method or ("residue" if tail.rational is not None else "contour")
    g_max = None
    if method == "contour":
        phi = TWO_PI * np.arange(512) / 512
        g_max = float(np.max(np.abs(tail.g(tail.radius * np.exp(1j * phi)))))
    elif method != "residue":
        raise ParameterError(f"Unknown coefficient method {method!r}; expected 'residue' or 'contour'.")

    if R is None:
        R = next((r for r in range(1, MAX_BERNOULLI_ORDER + 1) if tail_bound(tail, r, g_max) <= tol), None)
        if R is None:
            raise SeriesConvergenceError(f"No R <= {MAX_BERNOULLI_ORDER} reaches remainder {tol:.3e} for {tail.name}.")
    if not 1 <= R <= MAX_BERNOULLI_ORDER:
        raise ParameterError(f"R must lie in [1, {MAX_BERNOULLI_ORDER}], got {R}.")

    if method == "residue":
        coeffs = residue_coeffs(tail, R)
    else:
        coeffs, _ = laurent_coeffs(tail, R, samples)
    N = tail.N
    T_N = TrigPoly.from_map({k: kernel.fourier_coef(k) for k in range(-N, N + 1)})
    bound = tail_bound(tail, R, g_max)
    logger.info("Bernoulli series of %s: N=%d, R=%d, tail bound %.3e", kernel.name, N, R, bound)
    return BernoulliSeriesRep(N, T_N, coeffs, bound, kernel.name)


def reconstruct(rep, theta, tol=None):
    """
    T_N(theta) + sum_{m=1}^{R} c_m (B_m(theta) - S_N(B_m, theta)).

    Args:
        rep (BernoulliSeriesRep): The representation.
        theta (float or np.ndarray): Angles; away from 0 when c_1 != 0.
        tol (float, optional): Required accuracy; rejected when below the tail bound.

    Returns:
        float or np.ndarray: Real part of the reconstruction.
    """
    if tol is not None and rep.tail_bound > tol:
        raise ParameterError(f"Tail bound {rep.tail_bound:.3e} of {rep.name} exceeds tol {tol:.3e}.")
    theta = np.asarray(theta, dtype=float)
    total = np.asarray(eval_trig(rep.T_N, theta), dtype=complex)
    for m, c in enumerate(rep.coeffs, start=1):
        if c == 0:
            continue
        total = total + c * (bernoulli_eval(m, theta) - bernoulli_partial_sum(m, theta, rep.N))
    values = np.real(total)
    return float(values) if values.ndim == 0 else values

###############################################################################################################
# Checks

@dataclasses.dataclass(frozen=True)
class GoldenFormulaReport:
    max_error: float
    fourier_error: float
    tail_bound: float
    grid: int


def golden_formula_check(which, grid=4096, R=40, max_k=64):
    """
    Compare K1 or K2 with its Bernoulli series built from residues.

    The grid excludes |theta| <= 2 pi / grid, where B_1 jumps.

    Returns:
        GoldenFormulaReport: Max pointwise error, max Fourier coefficient error for |k| <= max_k,
        and the tail bound.
    """
    kernel = quasi_kernel(which)
    rep = represent(kernel, quasi_tail(which), R=R, method="residue")
    theta = TWO_PI * np.arange(2, grid - 1) / grid
    max_error = float(np.max(np.abs(quasi_eval(which, theta) - reconstruct(rep, theta))))
    fourier_error = max(abs(rep.fourier_coef(k) - kernel.fourier_coef(k)) for k in range(-max_k, max_k + 1))
    logger.info("Golden formula %s, R=%d: max error %.3e, Fourier error %.3e", which, R, max_error, fourier_error)
    return GoldenFormulaReport(max_error, float(fourier_error), rep.tail_bound, grid)


def uniform_bound_ratio(m, N, grid=4096):
    """max_theta |B_m - S_N(B_m)| (N+1)^m, theta off the jump of B_1."""
    theta = TWO_PI * np.arange(1, grid) / grid
    residual = bernoulli_eval(m, theta) - bernoulli_partial_sum(m, theta, N)
    return float(np.max(np.abs(residual))) * (N + 1.0) ** m
