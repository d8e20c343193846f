"""
Configuration loading.

The defaults live in configs/config.yaml next to this module. They are read once and
cached; load_config(path) replaces the cached settings with those of another file.
"""
import dataclasses
import functools
import logging
import os

import yaml

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), "configs", "config.yaml")


@dataclasses.dataclass(frozen=True)
class Settings:
    """
    Numeric defaults shared by all modules.

    Attributes:
        eval_tol (float): Tolerance for pointwise evaluation of truncated kernel series.
        series_term_cap (int): Longest Bernoulli partial sum before switching to the closed form.
        certify_tol (float): Allowed certificate gap.
        dual_tol (float): Tail tolerance of the dual pairing series.
        dual_dps (int): mpmath working precision for the pairing series.
        quad_grid (int): Base grid for L1 quadrature.
        gauss_order (int): Gauss-Legendre nodes per panel.
        panel_width (float): Maximum panel width in radians.
        bisect_xtol (float): Root tolerance of sign-change refinement.
        bisect_maxiter (int): Bisection step limit.
        contour_samples (int): Samples on the Laurent contour.
        contour_rel_tol (float): Relative tolerance of the doubling check on the contour.
        build_grid (int): Samples used to compute Fourier coefficients of h.
        verify_grid (int): Chebyshev grid size for bound verification.
        slack_tol (float): Allowed positive slack in the pointwise bound.
        zigzag_limit (int): Largest r accepted by favard_exact.
        table_digits (int): Significant digits in table output.
        float_digits (int): Significant digits in CSV and JSON output.
    """
    eval_tol: float = 1e-12
    series_term_cap: int = 1024
    certify_tol: float = 1e-6
    dual_tol: float = 1e-12
    dual_dps: int = 30
    quad_grid: int = 4096
    gauss_order: int = 24
    panel_width: float = 0.2
    bisect_xtol: float = 1e-12
    bisect_maxiter: int = 60
    contour_samples: int = 4096
    contour_rel_tol: float = 1e-8
    build_grid: int = 4096
    verify_grid: int = 4096
    slack_tol: float = 1e-9
    zigzag_limit: int = 64
    table_digits: int = 10
    float_digits: int = 17


def read_settings(path):
    """
    Read a YAML file into Settings.

    Args:
        path (str): Path to the YAML file.

    Returns:
        Settings: Parsed settings, with missing keys left at their defaults.

    Raises:
        ConfigError: If the file is not a mapping or holds unknown keys.
    """
    with open(path, "r") as file:
        raw = yaml.safe_load(file) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"Configuration file '{path}' must hold a mapping, got {type(raw).__name__}.")

    known = {field.name: field.type for field in dataclasses.fields(Settings)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigError(f"Unknown configuration keys in '{path}': {', '.join(unknown)}.")

    values = {}
    for key, value in raw.items():
        caster = int if known[key] in (int, "int") else float
        try:
            values[key] = caster(value)
        except (TypeError, ValueError) as error:
            raise ConfigError(f"Configuration key '{key}' has invalid value {value!r}.") from error
    logger.debug("Read %d configuration keys from %s", len(values), path)
    return Settings(**values)


@functools.lru_cache(maxsize=None)
def _cached_settings(path):
    return read_settings(path)


_active_path = DEFAULT_CONFIG_PATH


def load_config(path=None):
    """
    Return the active settings, optionally switching to another configuration file.

    Args:
        path (str, optional): YAML file to activate. None keeps the active file.

    Returns:
        Settings: The cached settings of the active file.
    """
    global _active_path
    if path is not None:
        _active_path = os.path.abspath(path)
        logger.info("Using configuration file %s", _active_path)
    return _cached_settings(_active_path)


def settings():
    """Shorthand for load_config() used for keyword defaults inside the package."""
    return load_config()
