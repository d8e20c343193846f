"""
Exceptions raised by favard_l1.

Every error derives from FavardError and, where it makes sense, from the matching
builtin as well, so callers may catch either one.
"""

###############################################################################################################
# Base class

class FavardError(Exception):
    """Base class for all errors raised by the package."""


###############################################################################################################
# Input and precondition errors

class ParameterError(FavardError, ValueError):
    """A precondition on the arguments of an operation was violated."""


class AliasingError(ParameterError):
    """The number of samples is too small (or not a power of two) for the requested frequencies."""


class ConfigError(FavardError, ValueError):
    """The configuration file is malformed or holds unknown keys."""


###############################################################################################################
# Numerical failures

class CorruptedCoefficientsError(FavardError, ValueError):
    """A trigonometric polynomial that should be real evaluated to a complex value."""


class InsufficientSamplingError(FavardError, ValueError):
    """Fourier coefficients needed for a convolution are missing."""


class QuadratureError(FavardError, ArithmeticError):
    """Sign-change refinement did not converge; the integrand is pathological."""


class SeriesConvergenceError(FavardError, ArithmeticError):
    """A series or contour sum did not reach the requested tolerance."""


class InterpolationError(FavardError, ArithmeticError):
    """The interpolation system is singular or the kernel has no parity."""


class ConstructionError(FavardError, ArithmeticError):
    """The algebraic polynomial construction produced an inconsistent result."""


class CertificationError(FavardError):
    """
    The upper and lower bounds of a certificate are further apart than allowed.

    Attributes:
        certificate: The offending certificate, holding both bounds.
    """
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
