"""
Inflated unit Lindley models.

* ULZI / ULOI: a point mass ``alpha`` at c = 0 or c = 1 mixed with a unit
  Lindley(theta) component of weight ``1 - alpha``.
* ULZOI: a Bernoulli(p) component of total mass ``alpha`` (so
  P(Y = 1) = alpha p and P(Y = 0) = alpha (1 - p)) mixed with a unit
  Lindley(theta) component of weight ``1 - alpha``.
"""
import dataclasses
import enum
import logging
import math
from typing import Dict, NamedTuple, Optional, Tuple, Union

import numpy as np

from . import unit_lindley
from .exceptions import DomainError, ModelMismatchError, ParameterError
from .proportions import ProportionSample
from .unit_lindley import ArrayLike, UnitLindleyParams, maybe_scalar

logger = logging.getLogger(__name__)


class InflationPoint(enum.Enum):
    """The end point carrying the inflation mass."""
    ZERO = 0.0
    ONE = 1.0

    @property
    def c(self) -> float:
        return self.value

    @property
    def opposite(self) -> 'InflationPoint':
        return InflationPoint.ONE if self is InflationPoint.ZERO else InflationPoint.ZERO


def _check_open_unit(name: str, value: float):
    if not 0.0 < value < 1.0:
        raise ParameterError(f'{name} must lie strictly inside (0, 1) (got {value!r})')


@dataclasses.dataclass(frozen=True)
class InflatedParams:
    """
    Parameters of the zero- or one-inflated unit Lindley distribution.

    Parameters
    ----------
    alpha : float
        Mass of the atom at ``point``, in (0, 1).

    theta : float
        Unit Lindley shape, positive.

    point : InflationPoint
        ``InflationPoint.ZERO`` for ULZI, ``InflationPoint.ONE`` for ULOI.
    """
    alpha: float
    theta: float
    point: InflationPoint = InflationPoint.ZERO

    def __post_init__(self):
        _check_open_unit('alpha', self.alpha)
        UnitLindleyParams(self.theta)
        if not isinstance(self.point, InflationPoint):
            raise ParameterError(f'Invalid inflation point: {self.point!r}')

    @property
    def base(self) -> UnitLindleyParams:
        return UnitLindleyParams(self.theta)


@dataclasses.dataclass(frozen=True)
class ZeroOneInflatedParams:
    """
    Parameters of the zero-and-one-inflated unit Lindley distribution.

    Parameters
    ----------
    alpha : float
        Total mass of the two atoms, in (0, 1).

    p : float
        Conditional mass at one given an atom, in (0, 1).

    theta : float
        Unit Lindley shape, positive.
    """
    alpha: float
    p: float
    theta: float

    def __post_init__(self):
        _check_open_unit('alpha', self.alpha)
        _check_open_unit('p', self.p)
        UnitLindleyParams(self.theta)

    @property
    def base(self) -> UnitLindleyParams:
        return UnitLindleyParams(self.theta)

    @property
    def mass_zero(self) -> float:
        return self.alpha * (1.0 - self.p)

    @property
    def mass_one(self) -> float:
        return self.alpha * self.p


AnyInflatedParams = Union[InflatedParams, ZeroOneInflatedParams]


def _as_unit_array(y: ArrayLike) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if np.any(~((y >= 0.0) & (y <= 1.0))):
        raise DomainError('Inflated densities are defined on [0, 1] only')
    return y


def _interior_log_pdf(theta: float, y: np.ndarray) -> np.ndarray:
    interior = (y > 0.0) & (y < 1.0)
    out = np.full(y.shape, -np.inf)
    if np.any(interior):
        out[interior] = unit_lindley.log_pdf(UnitLindleyParams(theta),
                                             y[interior])
    return out


def inflated_log_density(params: InflatedParams, y: ArrayLike) -> ArrayLike:
    """Log of `inflated_density`; ``-inf`` at the non-inflated end point."""
    y = _as_unit_array(y)
    out = math.log1p(-params.alpha) + _interior_log_pdf(params.theta, y)
    out = np.where(y == params.point.c, math.log(params.alpha), out)
    return maybe_scalar(out)


def inflated_density(params: InflatedParams, y: ArrayLike) -> ArrayLike:
    """
    Mixed density of ULZI / ULOI: ``alpha`` at the inflation point, zero at
    the opposite end point and ``(1 - alpha) f(y; theta)`` inside.

    Raises
    ------
    DomainError
        If ``y`` lies outside [0, 1].
    """
    return maybe_scalar(np.exp(inflated_log_density(params, y)))


def inflated_cdf(params: InflatedParams, y: ArrayLike) -> ArrayLike:
    """``alpha 1{y >= c} + (1 - alpha) F(y; theta)``, right-continuous."""
    y = np.asarray(y, dtype=float)
    atom = np.where(y >= params.point.c, params.alpha, 0.0)
    value = atom + (1.0 - params.alpha) * unit_lindley.cdf(params.base, y)
    return maybe_scalar(np.clip(value, 0.0, 1.0))


def _mean_var(atom_mass: float, atom_second: float,
              base: UnitLindleyParams, alpha: float) -> Tuple[float, float]:
    first = unit_lindley.raw_moment(base, 1)
    second = unit_lindley.raw_moment(base, 2)
    mean = atom_mass + (1.0 - alpha) * first
    variance = atom_second + (1.0 - alpha) * second - mean * mean
    return mean, variance


def inflated_mean_var(params: InflatedParams) -> Tuple[float, float]:
    """
    Mean and variance of ULZI / ULOI.

    ``E[Y] = alpha c + (1 - alpha) / (1 + theta)``; the variance uses the
    second unit Lindley moment, which involves E1(theta).
    """
    c = params.point.c
    return _mean_var(params.alpha * c, params.alpha * c * c,
                     params.base, params.alpha)


def zoi_log_density(params: ZeroOneInflatedParams, y: ArrayLike) -> ArrayLike:
    """Log of `zoi_density`."""
    y = _as_unit_array(y)
    out = math.log1p(-params.alpha) + _interior_log_pdf(params.theta, y)
    out = np.where(y == 0.0, math.log(params.mass_zero), out)
    out = np.where(y == 1.0, math.log(params.mass_one), out)
    return maybe_scalar(out)


def zoi_density(params: ZeroOneInflatedParams, y: ArrayLike) -> ArrayLike:
    """
    Mixed density of ULZOI: ``alpha (1 - p)`` at 0, ``alpha p`` at 1 and
    ``(1 - alpha) f(y; theta)`` inside.
    """
    return maybe_scalar(np.exp(zoi_log_density(params, y)))


def zoi_cdf(params: ZeroOneInflatedParams, y: ArrayLike) -> ArrayLike:
    """``alpha Ber(y; p) + (1 - alpha) F(y; theta)``, right-continuous."""
    y = np.asarray(y, dtype=float)
    bernoulli = np.where(y >= 1.0, 1.0, np.where(y >= 0.0, 1.0 - params.p, 0.0))
    value = (params.alpha * bernoulli
             + (1.0 - params.alpha) * unit_lindley.cdf(params.base, y))
    return maybe_scalar(np.clip(value, 0.0, 1.0))


def zoi_mean_var(params: ZeroOneInflatedParams) -> Tuple[float, float]:
    """Mean and variance of ULZOI; ``E[Y] = alpha p + (1 - alpha) / (1 + theta)``."""
    return _mean_var(params.mass_one, params.mass_one, params.base,
                     params.alpha)


def model_cdf(params: AnyInflatedParams):
    """The distribution function of ``params`` as a one-argument callable."""
    if isinstance(params, ZeroOneInflatedParams):
        return lambda y: zoi_cdf(params, y)
    return lambda y: inflated_cdf(params, y)


def check_support(params: AnyInflatedParams, sample: ProportionSample):
    """
    Raise `ModelMismatchError` if ``sample`` has observations where the
    model puts no mass.
    """
    if isinstance(params, ZeroOneInflatedParams):
        return
    if params.point is InflationPoint.ZERO and sample.n1 > 0:
        raise ModelMismatchError(
            f'Sample contains {sample.n1} exact ones, which a zero-inflated '
            f'model cannot produce',
            hint='fit ULZOI instead',
        )
    if params.point is InflationPoint.ONE and sample.n0 > 0:
        raise ModelMismatchError(
            f'Sample contains {sample.n0} exact zeros, which a one-inflated '
            f'model cannot produce',
            hint='fit ULZOI instead',
        )


def _xlogy(count: int, value: float) -> float:
    return count * math.log(value) if count else 0.0


def interior_log_likelihood(theta: float, sample: ProportionSample) -> float:
    """Unit Lindley log-likelihood of the interior observations."""
    if sample.m == 0:
        return 0.0
    return (sample.m * (2.0 * math.log(theta) - math.log1p(theta))
            - 3.0 * sample.L - theta * sample.S)


def log_likelihood_terms(model: AnyInflatedParams,
                         sample: ProportionSample) -> Dict[str, float]:
    """
    The factorized log-likelihood.

    For ULZI / ULOI: ``l1`` (alpha, from the atom count) and ``l2`` (theta,
    from the interior). For ULZOI: ``l1`` (alpha), ``l2`` (p, from the split
    of atoms between 0 and 1) and ``l3`` (theta).
    """
    check_support(model, sample)
    if isinstance(model, ZeroOneInflatedParams):
        atoms = sample.n0 + sample.n1
        return {
            'l1': _xlogy(atoms, model.alpha) + _xlogy(sample.m, 1.0 - model.alpha),
            'l2': _xlogy(sample.n1, model.p) + _xlogy(sample.n0, 1.0 - model.p),
            'l3': interior_log_likelihood(model.theta, sample),
        }

    at_c = sample.n0 if model.point is InflationPoint.ZERO else sample.n1
    return {
        'l1': _xlogy(at_c, model.alpha) + _xlogy(sample.n - at_c, 1.0 - model.alpha),
        'l2': interior_log_likelihood(model.theta, sample),
    }


def log_likelihood(model: AnyInflatedParams, sample: ProportionSample) -> float:
    """
    Log-likelihood of ``sample`` under ``model``, as the sum of the
    factorized terms.

    Raises
    ------
    ModelMismatchError
        If the sample holds an exact 1 under ULZI or an exact 0 under ULOI.
    """
    return math.fsum(log_likelihood_terms(model, sample).values())


def sample_inflated(params: InflatedParams, n: int,
                    rng: np.random.Generator) -> np.ndarray:
    """
    Draw ``n`` ULZI / ULOI variates: the inflation point when a uniform draw
    falls below ``alpha``, otherwise a unit Lindley draw.
    """
    u = rng.random(n)
    at_point = u < params.alpha
    out = np.full(n, params.point.c)
    out[~at_point] = unit_lindley.sample_n(
        params.base, int(np.count_nonzero(~at_point)), rng
    )
    return out


def sample_zoi(params: ZeroOneInflatedParams, n: int,
               rng: np.random.Generator) -> np.ndarray:
    """
    Draw ``n`` ULZOI variates by composition: 0 when a uniform draw is at
    most ``alpha (1 - p)``, 1 when it is at most ``alpha``, otherwise a unit
    Lindley draw.
    """
    u = rng.random(n)
    zero = u <= params.mass_zero
    one = ~zero & (u <= params.alpha)
    interior = ~(zero | one)
    out = np.where(one, 1.0, 0.0)
    out[interior] = unit_lindley.sample_n(
        params.base, int(np.count_nonzero(interior)), rng
    )
    return out


def sample_model(params: AnyInflatedParams, n: int,
                 rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` variates from either inflated family."""
    if isinstance(params, ZeroOneInflatedParams):
        return sample_zoi(params, n, rng)
    return sample_inflated(params, n, rng)


class ExponentialFamilyForm(NamedTuple):
    """
    Natural parameters ``eta``, sufficient statistics ``T`` and
    log-partition ``log_partition`` of an inflated model at one
    observation, with the residual ``check`` of the identity

        log f(y; v1) - log f(y; v2)
            = (eta(v1) - eta(v2)) . T(y) - (A(v1) - A(v2))
    """
    eta: np.ndarray
    T: np.ndarray
    log_partition: float
    check: float


def _natural_parameters(params: AnyInflatedParams) -> Tuple[np.ndarray, float]:
    # log of the unit Lindley normalizing constant theta^2 / (1 + theta)
    log_norm = 2.0 * math.log(params.theta) - math.log1p(params.theta)
    log_interior = math.log1p(-params.alpha) + log_norm
    if isinstance(params, ZeroOneInflatedParams):
        eta = np.array([
            math.log(params.alpha) + math.log1p(-params.p) - log_interior,
            math.log(params.p) - math.log1p(-params.p),
            -params.theta,
        ])
    else:
        eta = np.array([
            math.log(params.alpha) - log_interior,
            -params.theta,
        ])
    return eta, -log_interior


def _sufficient_statistics(params: AnyInflatedParams, y: float) -> np.ndarray:
    interior = 0.0 < y < 1.0
    odds = y / (1.0 - y) if interior else 0.0
    if isinstance(params, ZeroOneInflatedParams):
        atom = 0.0 if interior else 1.0
        return np.array([atom, y * atom, odds])
    return np.array([1.0 if y == params.point.c else 0.0, odds])


def _log_density(params: AnyInflatedParams, y: float) -> float:
    if isinstance(params, ZeroOneInflatedParams):
        return zoi_log_density(params, y)
    return inflated_log_density(params, y)


def natural_params_and_suffstats(
    params: AnyInflatedParams,
    y: float,
    reference: Optional[AnyInflatedParams] = None,
) -> ExponentialFamilyForm:
    """
    Exponential-family representation of an inflated model at ``y``.

    For ULZI / ULOI ``T(y) = (1{y = c}, y / (1 - y) 1{0 < y < 1})``; for
    ULZOI ``T(y) = (1{y in {0, 1}}, y 1{y in {0, 1}}, y / (1 - y) 1{0 < y < 1})``.
    The carrier ``(1 - y)^-3`` on the interior is parameter free.

    Parameters
    ----------
    params : InflatedParams or ZeroOneInflatedParams

    y : float
        An observation in the model's support.

    reference : same type as ``params``, optional
        Comparison parameters for the identity residual; defaults to
        ``params`` itself (residual 0).
    """
    y = float(y)
    if isinstance(params, InflatedParams) and y == params.point.opposite.c:
        raise DomainError(f'y={y} is outside the support of {params}')
    if reference is None:
        reference = params
    if type(reference) is not type(params):
        raise ParameterError('reference must be of the same family as params')

    eta, log_partition = _natural_parameters(params)
    eta_ref, log_partition_ref = _natural_parameters(reference)
    T = _sufficient_statistics(params, y)

    difference = _log_density(params, y) - _log_density(reference, y)
    predicted = float(np.dot(eta - eta_ref, T)) - (log_partition - log_partition_ref)
    return ExponentialFamilyForm(
        eta=eta, T=T, log_partition=log_partition,
        check=difference - predicted,
    )
