"""
Bernoulli, quasi-Bernoulli and Steklov kernels.

Each kernel is described by a KernelSpec carrying its closed-form Fourier coefficients, a
pointwise evaluator, its parity, its jump and kink locations and an exact periodic primitive
of K - K^(0). The primitive lets pairings with sign patterns be computed without quadrature.
"""
import dataclasses
import enum
import fractions
import functools
import logging
import math
import re
from typing import Callable, Optional

import mpmath
import numpy as np
from scipy.interpolate import BSpline
from scipy.special import comb, factorial

from .config import settings
from .exceptions import ParameterError
from .fourier_core import TWO_PI, PeriodicFn, wrap

logger = logging.getLogger(__name__)

MAX_BERNOULLI_ORDER = 64
# Angles this close to a jump are treated as sitting on it.
JUMP_SNAP = 1e-12
PARTIAL_SUM_CHUNK = 4096
_I_POWERS = (1, 1j, -1, -1j)

###############################################################################################################
# Kernel description

class KernelKind(enum.Enum):
    BERNOULLI = "bernoulli"
    QUASI_K1 = "K1"
    QUASI_K2 = "K2"
    STEKLOV = "steklov"


class Parity(enum.IntEnum):
    ODD = -1
    NONE = 0
    EVEN = 1


@dataclasses.dataclass(frozen=True, eq=False)
class KernelSpec:
    """
    A kernel on the circle.

    Attributes:
        name (str): Short name, e.g. "B3", "K1", "S2:0.25".
        kind (KernelKind): Family of the kernel.
        parity (Parity): Symmetry under theta -> -theta.
        fourier_coef (Callable): Closed form k -> K^(k).
        evaluator (Callable): (theta, tol) -> values.
        jump_points (tuple): Jump discontinuities.
        breakpoints (tuple): Jumps and kinks, used to split quadratures.
        primitive (Callable): Periodic antiderivative of K - K^(0).
        r (int, optional): Bernoulli order.
        m (int, optional): Steklov order.
        h (float, optional): Steklov width parameter.
    """
    name: str
    kind: KernelKind
    parity: Parity
    fourier_coef: Callable[[int], complex]
    evaluator: Callable
    jump_points: tuple = ()
    breakpoints: tuple = ()
    primitive: Optional[Callable] = None
    r: Optional[int] = None
    m: Optional[int] = None
    h: Optional[float] = None

    @property
    def mean(self):
        return self.fourier_coef(0).real

    def eval(self, theta, tol=None):
        return self.evaluator(theta, tol or settings().eval_tol)

    def as_periodic(self, tol=None):
        """The kernel as a PeriodicFn for fourier_core routines."""
        tol = tol or settings().eval_tol
        return PeriodicFn(lambda theta: self.evaluator(theta, tol), self.breakpoints,
                          self.fourier_coef, self.name)

###############################################################################################################
# Bernoulli kernels

def _check_order(r, limit=MAX_BERNOULLI_ORDER):
    if int(r) != r or r < 1:
        raise ParameterError(f"Bernoulli order must be an integer >= 1, got {r}.")
    if r > limit:
        raise ParameterError(f"Bernoulli order above {limit} is not supported, got {r}.")
    return int(r)


def bernoulli_coef(r, k):
    """
    Fourier coefficient of the Bernoulli kernel B_r.

    Args:
        r (int): Order, 1 <= r <= MAX_BERNOULLI_ORDER (64).
        k (int): Frequency.

    Returns:
        complex: 1/(ik)^r for k != 0, else 0.

    Raises:
        ParameterError: If r is not an integer in [1, 64].
    """
    r = _check_order(r)
    k = int(k)
    if k == 0:
        return 0j
    return complex(1 / (_I_POWERS[r % 4] * float(k) ** r))


def bernoulli_truncation(r, tol):
    """Smallest K with 2 K^(1-r) / (r-1) <= tol (r >= 2)."""
    if r < 2:
        raise ParameterError("The symmetric partial sum of B_1 does not converge uniformly.")
    if tol <= 0:
        raise ParameterError(f"Tolerance must be positive, got {tol}.")
    bound = lambda K: 2.0 * K ** (1 - r) / (r - 1)
    K = max(1, int(math.ceil((2.0 / ((r - 1) * tol)) ** (1.0 / (r - 1)))))
    while K > 1 and bound(K - 1) <= tol:
        K -= 1
    while bound(K) > tol:
        K += 1
    return K


def bernoulli_partial_sum(r, theta, K):
    """Symmetric partial sum sum_{0<|k|<=K} e^{ik theta}/(ik)^r."""
    theta = np.asarray(theta, dtype=float)
    ks = np.arange(1, K + 1, dtype=float)
    weights = ks ** -float(r) / _I_POWERS[r % 4]
    flat = theta.ravel()
    values = np.empty(flat.shape)
    for start in range(0, flat.size, PARTIAL_SUM_CHUNK):
        block = flat[start:start + PARTIAL_SUM_CHUNK]
        values[start:start + PARTIAL_SUM_CHUNK] = 2.0 * np.real(np.exp(1j * np.multiply.outer(block, ks)) @ weights)
    values = values.reshape(theta.shape)
    return float(values) if values.ndim == 0 else values


@functools.lru_cache(maxsize=None)
def bernoulli_polynomial_coefficients(r):
    """Coefficients of B_r(x), highest power first, as exact fractions."""
    numbers = [fractions.Fraction(*mpmath.bernfrac(j)) for j in range(r + 1)]
    return tuple(comb(r, j, exact=True) * numbers[j] for j in range(r + 1))


def bernoulli_polynomial(r, x):
    """Bernoulli polynomial B_r(x) with correctly rounded coefficients."""
    return np.polyval([float(c) for c in bernoulli_polynomial_coefficients(r)], x)


def bernoulli_closed_form(r, theta):
    """
    B_r(theta) = -(2pi)^r / r! * B~_r(theta / 2pi mod 1).

    For r = 1 this is pi - theta on (0, 2pi), with the midpoint value 0 at the jump.
    """
    r = _check_order(r, MAX_BERNOULLI_ORDER + 1)
    theta = wrap(theta)
    if r == 1:
        at_jump = np.minimum(theta, TWO_PI - theta) < JUMP_SNAP
        values = np.where(at_jump, 0.0, math.pi - theta)
    else:
        values = -(TWO_PI ** r) / factorial(r, exact=True) * bernoulli_polynomial(r, theta / TWO_PI)
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def bernoulli_eval(r, theta, tol=None):
    """
    Evaluate the Bernoulli kernel B_r.

    For r >= 2 the symmetric partial sum is used when its truncation stays within the configured
    series_term_cap; longer sums are replaced by the closed form, which is exact to roundoff.

    Args:
        r (int): Order.
        theta (float or np.ndarray): Angles.
        tol (float, optional): Allowed truncation error. Defaults to eval_tol.

    Returns:
        float or np.ndarray: Kernel values.
    """
    r = _check_order(r)
    cfg = settings()
    tol = tol or cfg.eval_tol
    if tol <= 0:
        raise ParameterError(f"Tolerance must be positive, got {tol}.")
    if r == 1:
        return bernoulli_closed_form(1, theta)
    K = bernoulli_truncation(r, tol)
    if K <= cfg.series_term_cap:
        return bernoulli_partial_sum(r, theta, K)
    return bernoulli_closed_form(r, theta)


def bernoulli_primitive(r, theta):
    """Periodic antiderivative of B_r, which is B_{r+1}."""
    return bernoulli_closed_form(r + 1, theta)


def bernoulli_kernel(r):
    """
    KernelSpec of B_r. The order must be an integer in [1, 64]; anything else raises ParameterError.
    """
    r = _check_order(r)
    return KernelSpec(
        name=f"B{r}",
        kind=KernelKind.BERNOULLI,
        parity=Parity.ODD if r % 2 else Parity.EVEN,
        fourier_coef=lambda k: bernoulli_coef(r, k),
        evaluator=lambda theta, tol: bernoulli_eval(r, theta, tol),
        jump_points=(0.0,) if r == 1 else (),
        breakpoints=(0.0,),
        primitive=lambda theta: bernoulli_primitive(r, theta),
        r=r,
    )

###############################################################################################################
# Quasi-Bernoulli kernels K1 = B_1 cos, K2 = B_1 sin

def _check_which(which):
    which = str(which).upper()
    if which not in ("K1", "K2"):
        raise ParameterError(f"Quasi-Bernoulli kernel must be K1 or K2, got {which!r}.")
    return which


def quasi_coef(which, k):
    """
    Fourier coefficient of K1 or K2.

    Args:
        which (str): "K1" or "K2".
        k (int): Frequency.

    Returns:
        complex: The closed-form coefficient.
    """
    which = _check_which(which)
    k = int(k)
    if which == "K1":
        if k == 0:
            return 0j
        if abs(k) == 1:
            return complex(k / 4j)
        return complex(k / ((k * k - 1) * 1j))
    if k == 0:
        return 1 + 0j
    if abs(k) == 1:
        return 0.25 + 0j
    return complex(-1.0 / (k * k - 1))


def quasi_eval(which, theta):
    """K1(theta) = B_1(theta) cos(theta) and K2(theta) = B_1(theta) sin(theta)."""
    which = _check_which(which)
    theta = np.asarray(theta, dtype=float)
    factor = np.cos(theta) if which == "K1" else np.sin(theta)
    values = bernoulli_closed_form(1, theta) * factor
    return float(values) if np.ndim(values) == 0 else values


def quasi_primitive(which, theta):
    """Periodic antiderivative of K - K^(0) for K1 or K2."""
    which = _check_which(which)
    theta = wrap(theta)
    if which == "K1":
        return (math.pi - theta) * np.sin(theta) - np.cos(theta)
    return -(math.pi - theta) * np.cos(theta) - np.sin(theta) - theta


def quasi_kernel(which):
    which = _check_which(which)
    return KernelSpec(
        name=which,
        kind=KernelKind.QUASI_K1 if which == "K1" else KernelKind.QUASI_K2,
        parity=Parity.ODD if which == "K1" else Parity.EVEN,
        fourier_coef=lambda k: quasi_coef(which, k),
        evaluator=lambda theta, tol: quasi_eval(which, theta),
        breakpoints=(0.0,),
        primitive=lambda theta: quasi_primitive(which, theta),
    )

###############################################################################################################
# Steklov kernels

def check_steklov(m, h):
    if int(m) != m or m < 1:
        raise ParameterError(f"Steklov order must be an integer >= 1, got {m}.")
    if not 0 < h <= 1:
        raise ParameterError(f"Steklov width h must lie in (0, 1], got {h}.")
    if m * h >= 1:
        raise ParameterError(f"Steklov support needs m*h < 1, got m={m}, h={h}.")
    return int(m), float(h)


def steklov_terms(m, h):
    """Weights (-1)^(m-p) C(m, p) and shifts (2p - m) pi h of the Bernoulli sum."""
    weights = [(-1) ** (m - p) * comb(m, p, exact=True) for p in range(m + 1)]
    shifts = [(2 * p - m) * math.pi * h for p in range(m + 1)]
    return weights, shifts


def steklov_coef(m, h, k):
    """
    Fourier coefficient of the Steklov kernel.

    Returns:
        float: (sin(pi h k)/(pi h k))^m, and 1 at k = 0.
    """
    m, h = check_steklov(m, h)
    if k == 0:
        return 1.0
    x = math.pi * h * k
    return (math.sin(x) / x) ** m


def steklov_eval(m, h, theta, tol=None):
    """
    Steklov kernel as 1 + (2 pi h)^(-m) sum_p (-1)^(m-p) C(m, p) B_m(theta + (2p - m) pi h).

    Args:
        m (int): Order.
        h (float): Width, 0 < h <= 1 and m*h < 1.
        theta (float or np.ndarray): Angles.
        tol (float, optional): Overall tolerance; each Bernoulli term gets tol / 2^m.

    Returns:
        float or np.ndarray: Kernel values.
    """
    m, h = check_steklov(m, h)
    tol = tol or settings().eval_tol
    theta = np.asarray(theta, dtype=float)
    weights, shifts = steklov_terms(m, h)
    total = sum(w * bernoulli_eval(m, theta + s, tol / 2 ** m) for w, s in zip(weights, shifts))
    values = 1.0 + total / (TWO_PI * h) ** m
    return float(values) if np.ndim(values) == 0 else values


def steklov_bspline(m, h, theta):
    """
    Steklov kernel as a scaled cardinal B-spline, (1/h) N_m(theta / (2 pi h) + m/2).

    Jumps of the order-one kernel get the midpoint value 1/(2h).
    """
    m, h = check_steklov(m, h)
    theta = np.asarray(theta, dtype=float)
    centred = wrap(theta)
    centred = np.where(centred > math.pi, centred - TWO_PI, centred)
    spline = BSpline.basis_element(np.arange(m + 1, dtype=float), extrapolate=False)
    values = np.nan_to_num(spline(centred / (TWO_PI * h) + m / 2.0), nan=0.0) / h
    if m == 1:
        values = np.where(np.abs(np.abs(centred) - math.pi * h) < JUMP_SNAP, 0.5 / h, values)
    return float(values) if values.ndim == 0 else values


def steklov_primitive(m, h, theta):
    """Periodic antiderivative of chi - 1."""
    weights, shifts = steklov_terms(m, h)
    theta = np.asarray(theta, dtype=float)
    total = sum(w * bernoulli_closed_form(m + 1, theta + s) for w, s in zip(weights, shifts))
    return total / (TWO_PI * h) ** m


def steklov_kernel(m, h):
    m, h = check_steklov(m, h)
    _, shifts = steklov_terms(m, h)
    return KernelSpec(
        name=f"S{m}:{h:g}",
        kind=KernelKind.STEKLOV,
        parity=Parity.EVEN,
        fourier_coef=lambda k: steklov_coef(m, h, k),
        evaluator=lambda theta, tol: steklov_eval(m, h, theta, tol),
        jump_points=(-shifts[0], shifts[0]) if m == 1 else (),
        breakpoints=tuple(shifts),
        primitive=lambda theta: steklov_primitive(m, h, theta),
        m=m,
        h=h,
    )

###############################################################################################################
# Names

_STEKLOV_NAME = re.compile(r"^S(\d+):(.+)$")


def parse_kernel(name):
    """
    Build a kernel from its short name.

    Args:
        name (str): "B<r>" with 1 <= r <= 64, "K1", "K2" or "S<m>:<h>" (h may be a fraction like 1/4).

    Returns:
        KernelSpec: The kernel.

    Raises:
        ParameterError: If the name is not recognized or its parameters are out of range.
    """
    text = str(name).strip()
    upper = text.upper()
    if upper in ("K1", "K2"):
        return quasi_kernel(upper)
    if upper.startswith("B") and upper[1:].isdigit():
        return bernoulli_kernel(int(upper[1:]))
    match = _STEKLOV_NAME.match(upper)
    if match:
        try:
            h = float(fractions.Fraction(match.group(2)))
        except (ValueError, ZeroDivisionError) as error:
            raise ParameterError(f"Invalid Steklov width in kernel name {text!r}.") from error
        return steklov_kernel(int(match.group(1)), h)
    raise ParameterError(f"Unknown kernel {text!r}; expected B<r>, K1, K2 or S<m>:<h>.")
