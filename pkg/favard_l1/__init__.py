"""
favard_l1: best L1 approximation of Bernoulli-type kernels with certificates, Favard constants,
Bernoulli series of quasi-Bernoulli kernels and weighted algebraic approximation of Lipschitz
functions.
"""
import logging

from .best_l1 import (Certificate, Regime, SignKind, SignPattern, SteklovResult, best_poly_candidate, certify,
                      closed_form_value, dual_lower, quasi_tau_series, sign_agreement, steklov_best)
from .bernoulli_series import (AnalyticTail, BernoulliSeriesRep, golden_formula_check, laurent_coeffs,
                               reconstruct, represent, residue_coeffs)
from .config import load_config
from .exceptions import FavardError
from .favard import (FavardConstant, favard_exact, favard_series, generating_value, partial_fraction_tan)
from .fourier_core import PeriodicFn, TrigPoly, convolve_poly, eval_trig, fourier_coeffs, l1_norm
from .kernels import (KernelSpec, bernoulli_coef, bernoulli_eval, parse_kernel, quasi_coef, quasi_eval,
                      steklov_coef, steklov_eval)
from .lipschitz_alg import (ChebyPoly, LipFunction, build_polynomial, factors, to_periodic, verify_bound)

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())
