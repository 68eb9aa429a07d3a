"""
The one-parameter unit Lindley distribution on (0, 1).

If X follows a Lindley(theta) distribution then Y = X / (1 + X) is unit
Lindley with density

    f(y; theta) = theta^2 / (1 + theta) * (1 - y)^-3 * exp(-theta y / (1 - y))
"""
import dataclasses
import logging
import math
from typing import Union

import numpy as np
from scipy import integrate

from .exceptions import DomainError, ParameterError
from .special import (BracketedRootProblem, exp_integral_e1_scaled,
                      solve_bracketed)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

QUANTILE_TOLERANCE = 1e-15
MOMENT_TOLERANCE = 1e-10

# Interior draws are clipped into the open interval so that an interior draw
# can never be mistaken for an atom.
_INTERIOR_LO = np.finfo(float).tiny
_INTERIOR_HI = np.nextafter(1.0, 0.0)


def maybe_scalar(values: np.ndarray) -> ArrayLike:
    """Return a python float for 0-d results, else the array."""
    values = np.asarray(values)
    if values.ndim == 0:
        return float(values)
    return values


@dataclasses.dataclass(frozen=True)
class UnitLindleyParams:
    """Unit Lindley shape parameter ``theta > 0``."""
    theta: float

    def __post_init__(self):
        if not (self.theta > 0 and math.isfinite(self.theta)):
            raise ParameterError(
                f'theta must be a positive finite number (got {self.theta!r})'
            )


def _log_normalizer(theta: float) -> float:
    return 2.0 * math.log(theta) - math.log1p(theta)


def log_pdf(params: UnitLindleyParams, x: ArrayLike) -> ArrayLike:
    """
    Log density of the unit Lindley distribution.

    Raises
    ------
    DomainError
        If any ``x`` lies outside the open interval (0, 1).
    """
    x = np.asarray(x, dtype=float)
    if np.any(~((x > 0.0) & (x < 1.0))):
        raise DomainError('Unit Lindley density is defined on (0, 1) only')
    theta = params.theta
    value = (_log_normalizer(theta) - 3.0 * np.log1p(-x)
             - theta * x / (1.0 - x))
    return maybe_scalar(value)


def pdf(params: UnitLindleyParams, x: ArrayLike) -> ArrayLike:
    """
    Density of the unit Lindley distribution, evaluated as exp(log pdf)
    so that it stays finite as x approaches 1.

    Parameters
    ----------
    params : UnitLindleyParams

    x : float or numpy.ndarray
        Points strictly inside (0, 1).
    """
    return maybe_scalar(np.exp(log_pdf(params, x)))


def cdf(params: UnitLindleyParams, x: ArrayLike) -> ArrayLike:
    """
    Distribution function of the unit Lindley distribution.

    With t = theta x / (1 - x) this is
    ``1 - (1 + t / (1 + theta)) exp(-t)`` on (0, 1), clamped to 0 below the
    support and 1 above it.
    """
    x = np.asarray(x, dtype=float)
    theta = params.theta
    interior = (x > 0.0) & (x < 1.0)
    xi = np.where(interior, x, 0.5)
    t = theta * xi / (1.0 - xi)
    inner = -np.expm1(-t) - t / (1.0 + theta) * np.exp(-t)
    value = np.where(interior, inner, np.where(x >= 1.0, 1.0, 0.0))
    return maybe_scalar(np.clip(value, 0.0, 1.0))


def quantile(params: UnitLindleyParams, u: float) -> float:
    """
    Quantile function, by bracketed root finding on the distribution
    function.

    Raises
    ------
    DomainError
        If ``u`` is not strictly inside (0, 1).
    """
    u = float(u)
    if not 0.0 < u < 1.0:
        raise DomainError(f'Quantile level must lie in (0, 1) (got {u!r})')

    problem = BracketedRootProblem(
        objective=lambda x: cdf(params, x) - u,
        lo=0.0,
        hi=1.0,
        tolerance=QUANTILE_TOLERANCE,
    )
    return solve_bracketed(problem)


def raw_moment(params: UnitLindleyParams, r: int) -> float:
    """
    The r-th raw moment E[Y^r].

    The first two moments use closed forms, the second through the
    exponential integral:

        E[Y^2] = (theta^2 e^theta E1(theta) - theta + 1) / (1 + theta)

    Higher moments are computed by adaptive quadrature.
    """
    if r < 1 or int(r) != r:
        raise DomainError(f'Moment order must be a positive integer (got {r!r})')
    theta = params.theta
    if r == 1:
        return 1.0 / (1.0 + theta)
    if r == 2:
        scaled = exp_integral_e1_scaled(theta)
        return (theta * theta * scaled - theta + 1.0) / (1.0 + theta)

    value, error = integrate.quad(
        lambda y: y ** r * pdf(params, y), 0.0, 1.0,
        epsabs=MOMENT_TOLERANCE, limit=200,
    )
    logger.debug('Moment %d by quadrature: %r (error estimate %g)',
                 r, value, error)
    return value


def sample_n(params: UnitLindleyParams, n: int,
             rng: np.random.Generator) -> np.ndarray:
    """
    Draw ``n`` unit Lindley variates.

    A Lindley variate is exponential with rate theta with probability
    theta / (1 + theta), otherwise a shape-2 gamma with rate theta; each
    draw is mapped through x / (1 + x).
    """
    theta = params.theta
    exponential = rng.random(n) < theta / (1.0 + theta)
    shape = np.where(exponential, 1.0, 2.0)
    x = rng.gamma(shape=shape, scale=1.0 / theta)
    y = x / (1.0 + x)
    return np.clip(y, _INTERIOR_LO, _INTERIOR_HI)


def sample(params: UnitLindleyParams, rng: np.random.Generator) -> float:
    """Draw a single unit Lindley variate."""
    return float(sample_n(params, 1, rng)[0])
