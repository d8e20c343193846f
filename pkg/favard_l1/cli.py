"""
Command-line interface: favard-l1 {constants, certify, steklov, series, lipschitz}.

Exit codes: 0 when every check passed, 1 on a tolerance breach or a pipeline error,
2 on a usage error.
"""
import fractions
import functools
import logging
import sys

import click

from .best_l1 import Regime, steklov_best
from .best_l1 import certify as certify_kernel
from .bernoulli_series import golden_formula_check
from .config import load_config
from .exceptions import FavardError
from .favard import favard_exact, favard_series, generating_value
from .kernels import parse_kernel
from .lipschitz_alg import build_polynomial, classical_factors, named_function, verify_bound
from .report import FORMATS, ReportFrame

logger = logging.getLogger(__name__)

CERTIFY_KERNELS = tuple(f"B{r}" for r in range(1, 13)) + ("K1", "K2")
TEST_FUNCTIONS = ("const", "linear", "abs", "abs_shifted", "smooth_sin")

###############################################################################################################
# Argument parsing

def parse_n_range(text, low, high):
    """
    Parse 'a..b' or a single integer into a list of n, each within [low, high].

    Raises:
        click.BadParameter: On malformed input or values out of range.
    """
    try:
        if ".." in text:
            start, stop = (int(part) for part in text.split("..", 1))
        else:
            start = stop = int(text)
    except ValueError as error:
        raise click.BadParameter(f"{text!r} is not an integer or a range a..b.") from error
    if start > stop or start < low or stop > high:
        raise click.BadParameter(f"{text!r} must lie within [{low}, {high}] with a <= b.")
    return list(range(start, stop + 1))


def parse_float_list(text):
    """Comma separated floats; fractions such as 1/4 are accepted."""
    try:
        return [float(fractions.Fraction(part.strip())) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as error:
        raise click.BadParameter(f"{text!r} is not a comma separated list of numbers.") from error


def output_options(command):
    """Shared --format and --out options."""
    command = click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), default=None,
                           help="Write the report to this file instead of standard output.")(command)
    command = click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True,
                           help="Report format.")(command)
    return command


def emit(report, fmt, out):
    """Write the report and exit 1 if any row failed."""
    if out:
        report.save(out, fmt)
    else:
        click.echo(report.render(fmt), nl=False)
    if not report.passed:
        sys.exit(1)


def pipeline(function):
    """Turn package errors into a diagnostic on standard error and exit status 1."""
    @functools.wraps(function)
    def wrapper(*args, **kwargs):
        try:
            return function(*args, **kwargs)
        except FavardError as error:
            click.echo(f"Error: {error}", err=True)
            sys.exit(1)
    return wrapper

###############################################################################################################
# Commands

@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="YAML file overriding the numeric defaults.")
@click.option("-v", "--verbose", count=True, help="Repeat for more log output.")
def main(config_path, verbose):
    """
    Best L1 approximation of Bernoulli-type kernels, Favard constants and
    weighted algebraic approximation of Lipschitz functions.
    """
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(level=level, format="[%(levelname)s] %(name)s: %(message)s")
    try:
        load_config(config_path)
    except FavardError as error:
        raise click.BadParameter(str(error), param_hint="--config") from error


@main.command()
@click.option("--r-max", "r_max", type=click.IntRange(0, 64), default=12, show_default=True,
              help="Largest index r.")
@click.option("--tol", type=float, default=1e-10, show_default=True, help="Allowed |exact - series|.")
@output_options
@pipeline
def constants(r_max, tol, fmt, out):
    """Favard constants K_r, exact and from their series."""
    report = ReportFrame("constants", {"r_max": r_max, "tol": tol})
    for r in range(r_max + 1):
        exact = favard_exact(r)
        # K_0 has no series of its own; the generating function at 0 is the second route
        series = favard_series(r) if r else generating_value(0.0)
        difference = abs(exact.value - series)
        report.append({"r": r, "K_r": exact.value, "exact": exact.label(), "series": series,
                       "difference": difference, "passed": difference <= tol})
    emit(report, fmt, out)


@main.command()
@click.argument("kernel", type=click.Choice(CERTIFY_KERNELS, case_sensitive=False))
@click.argument("n_range")
@click.option("--tol", type=float, default=1e-6, show_default=True, help="Allowed certificate gap.")
@click.option("--grid", type=int, default=None, help="Base grid of the L1 quadrature (power of two).")
@output_options
@pipeline
def certify(kernel, n_range, tol, grid, fmt, out):
    """Sandwich certificates for E_{n-1}(KERNEL)_1 over N_RANGE ('a..b' or 'n')."""
    ns = parse_n_range(n_range, 2, 256)
    spec = parse_kernel(kernel)
    report = ReportFrame("certify", {"kernel": spec.name, "n": n_range, "tol": tol, "grid": grid})
    for n in ns:
        cert = certify_kernel(spec, n, tol=tol, strict=False, grid=grid)
        closed = cert.closed_form
        report.append({
            "kernel": spec.name, "n": n, "lower": cert.lower, "upper": cert.upper, "gap": cert.gap,
            "closed_form": closed, "lower_error": abs(cert.lower - closed) if closed is not None else None,
            "sign_ok": cert.sign_ok, "passed": cert.passed(tol),
        })
    emit(report, fmt, out)


@main.command()
@click.option("--m", "m", type=click.IntRange(1, 16), required=True, help="Steklov order.")
@click.option("--h", "h_list", required=True, help="Comma separated widths, e.g. 0.25,3/8.")
@click.option("--n", "n_range", required=True, help="n or a range a..b.")
@click.option("--tol", type=float, default=1e-6, show_default=True, help="Allowed certificate gap.")
@click.option("--grid", type=int, default=None, help="Base grid of the L1 quadrature (power of two).")
@output_options
@pipeline
def steklov(m, h_list, n_range, tol, grid, fmt, out):
    """Regimes and best-approximation values of Steklov kernels."""
    hs = parse_float_list(h_list)
    ns = parse_n_range(n_range, 1, 256)
    report = ReportFrame("steklov", {"m": m, "h": h_list, "n": n_range, "tol": tol, "grid": grid})
    for h in hs:
        for n in ns:
            result = steklov_best(m, h, n, tol=tol, grid=grid)
            cert = result.certificate
            if result.regime is Regime.BOUND:
                ok = cert.upper >= cert.lower - 1e-10
            else:
                ok = result.certified
            report.append({"m": m, "h": h, "n": n, "regime": result.regime.value, "value": result.value,
                           "lower": cert.lower, "upper": cert.upper, "gap": cert.gap,
                           "certified": result.certified, "passed": ok})
    emit(report, fmt, out)


@main.command()
@click.argument("which", type=click.Choice(("K1", "K2"), case_sensitive=False))
@click.option("--R", "R", type=click.IntRange(1, 64), default=40, show_default=True,
              help="Number of Bernoulli terms.")
@click.option("--grid", type=int, default=4096, show_default=True, help="Evaluation grid size.")
@click.option("--tol", type=float, default=1e-8, show_default=True, help="Allowed max error.")
@output_options
@pipeline
def series(which, R, grid, tol, fmt, out):
    """Bernoulli series of K1 or K2 against the closed form."""
    which = which.upper()
    result = golden_formula_check(which, grid=grid, R=R)
    report = ReportFrame("series", {"which": which, "R": R, "grid": grid, "tol": tol})
    report.append({"which": which, "R": R, "grid": grid, "max_error": result.max_error,
                   "fourier_error": result.fourier_error, "tail_bound": result.tail_bound,
                   "passed": result.tail_bound <= tol and result.max_error <= tol})
    emit(report, fmt, out)


@main.command()
@click.argument("function", type=click.Choice(TEST_FUNCTIONS))
@click.argument("n_range")
@click.option("--shift", type=float, default=0.5, show_default=True, help="The a of abs_shifted |x - a|.")
@click.option("--grid", type=int, default=4096, show_default=True, help="Chebyshev verification grid.")
@click.option("--tol", type=float, default=1e-9, show_default=True, help="Allowed positive slack.")
@output_options
@pipeline
def lipschitz(function, n_range, shift, grid, tol, fmt, out):
    """Weighted algebraic approximation of a built-in Lipschitz FUNCTION."""
    ns = parse_n_range(n_range, 2, 256)
    f = named_function(function, shift)
    report = ReportFrame("lipschitz", {"function": f.name, "n": n_range, "grid": grid, "tol": tol})
    for n in ns:
        poly = build_polynomial(f, n)
        bound = verify_bound(f, poly, n, grid)
        old_t, old_s = classical_factors(n)
        report.append({"function": f.name, "n": n, "T": bound.T, "S": bound.S, "max_slack": bound.max_slack,
                       "max_ratio": bound.max_ratio, "argmax_x": bound.argmax_x, "degree": bound.degree,
                       "classical_T": old_t, "classical_S": old_s,
                       "passed": bound.max_slack <= tol and bound.degree <= n})
    emit(report, fmt, out)


if __name__ == "__main__":
    main()
