"""
Scalar special functions and bracketed root finding.

The exponential integral feeds the second moment of the unit Lindley
distribution; digamma and trigamma feed the inflated beta score and
information.
"""
import dataclasses
import logging
import math
from typing import Callable

from scipy import optimize

from .exceptions import ConvergenceError, DomainError, NoSignChangeError

logger = logging.getLogger(__name__)

EULER_MASCHERONI = 0.57721566490153286061

# E1 switches from its power series to the continued fraction above this:
E1_SERIES_LIMIT = 1.0
E1_MAX_TERMS = 500
E1_EPS = 1e-16

ROOT_MAX_ITERATIONS = 200

# Asymptotic series of digamma/trigamma are used once x exceeds this:
ASYMPTOTIC_SHIFT = 6.0

# Bernoulli numbers B_2k for k = 1..7
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not x > 0.0:
        raise DomainError(f'{name} requires x > 0 (got {x!r})')
    if math.isinf(x):
        raise DomainError(f'{name} requires a finite argument')
    return x


def _e1_series(x: float) -> float:
    total = -EULER_MASCHERONI - math.log(x)
    term = 1.0
    for k in range(1, E1_MAX_TERMS):
        term *= -x / k
        delta = -term / k
        total += delta
        if abs(delta) < abs(total) * E1_EPS:
            return total
    raise ConvergenceError('E1 power series did not converge',
                           iterations=E1_MAX_TERMS, last_iterate=total)


def _e1_continued_fraction_scaled(x: float) -> float:
    """exp(x) * E1(x) by the modified Lentz continued fraction."""
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, E1_MAX_TERMS):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < E1_EPS:
            return h
    raise ConvergenceError('E1 continued fraction did not converge',
                           iterations=E1_MAX_TERMS, last_iterate=h)


def exp_integral_e1(x: float) -> float:
    """
    The exponential integral E1(x) = integral from 1 to infinity of
    exp(-x t) / t dt.

    Parameters
    ----------
    x : float
        Strictly positive argument.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        If ``x <= 0``.
    """
    x = _check_positive('exp_integral_e1', x)
    if x <= E1_SERIES_LIMIT:
        return _e1_series(x)
    return _e1_continued_fraction_scaled(x) * math.exp(-x)


def exp_integral_e1_scaled(x: float) -> float:
    """``exp(x) * E1(x)``, finite for arguments where exp(x) overflows."""
    x = _check_positive('exp_integral_e1_scaled', x)
    if x <= E1_SERIES_LIMIT:
        return math.exp(x) * _e1_series(x)
    return _e1_continued_fraction_scaled(x)


def digamma(x: float) -> float:
    """
    The digamma function psi(x) = d/dx log Gamma(x), for x > 0.

    Shifts the argument upwards with psi(x) = psi(x + 1) - 1/x and then
    sums the asymptotic series.
    """
    x = _check_positive('digamma', x)
    result = 0.0
    while x < ASYMPTOTIC_SHIFT:
        result -= 1.0 / x
        x += 1.0

    inv2 = 1.0 / (x * x)
    power = inv2
    series = 0.0
    for k, b2k in enumerate(_BERNOULLI, 1):
        series += b2k / (2 * k) * power
        power *= inv2
    return result + math.log(x) - 0.5 / x - series


def trigamma(x: float) -> float:
    """The trigamma function psi'(x), for x > 0."""
    x = _check_positive('trigamma', x)
    result = 0.0
    while x < ASYMPTOTIC_SHIFT:
        result += 1.0 / (x * x)
        x += 1.0

    inv = 1.0 / x
    inv2 = inv * inv
    power = inv2 * inv
    series = 0.0
    for b2k in _BERNOULLI:
        series += b2k * power
        power *= inv2
    return result + inv + 0.5 * inv2 + series


@dataclasses.dataclass(frozen=True)
class BracketedRootProblem:
    """
    A one-dimensional root problem with a sign-changing bracket.

    Parameters
    ----------
    objective : callable
        Real function of one real argument.

    lo, hi : float
        Bracket end points, ``lo < hi``.

    tolerance : float
        Absolute tolerance on the argument.
    """
    objective: Callable[[float], float]
    lo: float
    hi: float
    tolerance: float = 1e-12

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(
                f'Bracket requires lo < hi (got [{self.lo}, {self.hi}])'
            )
        if not self.tolerance > 0:
            raise DomainError('Root tolerance must be positive')


def solve_bracketed(problem: BracketedRootProblem) -> float:
    """
    Find a root of ``problem.objective`` inside its bracket.

    Uses Brent's method (bisection safeguarding inverse quadratic and
    secant steps), capped at ``ROOT_MAX_ITERATIONS`` iterations.

    Raises
    ------
    NoSignChangeError
        If the objective has the same sign at both ends of the bracket.

    ConvergenceError
        If the iteration cap is reached.
    """
    f_lo = float(problem.objective(problem.lo))
    f_hi = float(problem.objective(problem.hi))
    if f_lo == 0.0:
        return float(problem.lo)
    if f_hi == 0.0:
        return float(problem.hi)
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise NoSignChangeError(
            f'Objective does not change sign over [{problem.lo}, {problem.hi}] '
            f'(f(lo)={f_lo}, f(hi)={f_hi})'
        )

    root, result = optimize.brentq(
        problem.objective, problem.lo, problem.hi,
        xtol=problem.tolerance,
        maxiter=ROOT_MAX_ITERATIONS,
        full_output=True,
        disp=False,
    )
    if not result.converged:
        raise ConvergenceError(
            f'Root finder did not converge within {ROOT_MAX_ITERATIONS} '
            f'iterations',
            iterations=ROOT_MAX_ITERATIONS,
            last_iterate=root,
        )
    logger.debug('Root %r found in %d iterations', root, result.iterations)
    return float(root)
