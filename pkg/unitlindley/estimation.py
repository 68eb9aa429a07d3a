"""
Estimation for the inflated unit Lindley models.

The likelihood factorizes into an inflation part depending on the atom
counts only, and an interior part depending on theta through
``m`` (interior count) and ``S`` (sum of y / (1 - y)). This gives closed-form
maximum likelihood estimates, a diagonal Fisher information matrix, and a
Cox-Snell bias correction for theta computed conditionally on ``m``.
"""
import dataclasses
import enum
import logging
import math
from typing import Dict, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .exceptions import (BoundaryError, DomainError, EstimationError,
                         ModelMismatchError, NoInteriorDataError, UsageError)
from .inflated import (AnyInflatedParams, InflatedParams, InflationPoint,
                       ZeroOneInflatedParams, log_likelihood)
from .proportions import ProportionSample, suff_stats

logger = logging.getLogger(__name__)

__all__ = [
    'ConfidenceInterval', 'FitReport', 'Method', 'ModelKind',
    'ProportionSample', 'bcmle_theta', 'bias_corrected_theta', 'cme_theta',
    'confidence_intervals', 'cox_snell_bias', 'fisher_inflated',
    'fisher_zoi', 'fit_unit_lindley', 'fitted_params', 'mle_inflated',
    'mle_zoi', 'score_theta', 'standard_errors', 'suff_stats', 'theta_mle',
    'z_value',
]

DEFAULT_LEVEL = 0.95
SCORE_TOLERANCE = 1e-8

# Open parameter spaces; Wald intervals leaving them are flagged.
PARAMETER_SPACE = {
    'alpha': (0.0, 1.0),
    'p': (0.0, 1.0),
    'theta': (0.0, math.inf),
    'mu': (0.0, 1.0),
    'phi': (0.0, math.inf),
}


class ModelKind(enum.Enum):
    """The model families which can be fitted."""
    ULZI = 'ULZI'
    ULOI = 'ULOI'
    ULZOI = 'ULZOI'
    ZIB = 'ZIB'
    ZOIB = 'ZOIB'

    @classmethod
    def parse(cls, value: str) -> 'ModelKind':
        try:
            return cls(str(value).upper())
        except ValueError:
            raise UsageError(
                f'Unknown model {value!r}; choose from '
                f'{", ".join(kind.value.lower() for kind in cls)}'
            ) from None

    @property
    def is_unit_lindley(self) -> bool:
        return self in (ModelKind.ULZI, ModelKind.ULOI, ModelKind.ULZOI)


class Method(enum.Enum):
    """Estimation methods for theta."""
    MLE = 'MLE'
    BCMLE = 'BCMLE'
    CME = 'CME'

    @classmethod
    def parse(cls, value: str) -> 'Method':
        try:
            return cls(str(value).upper())
        except ValueError:
            raise UsageError(
                f'Unknown method {value!r}; choose from '
                f'{", ".join(method.value.lower() for method in cls)}'
            ) from None


class ConfidenceInterval(NamedTuple):
    """A two-sided Wald interval."""
    lo: float
    hi: float
    level: float

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi


@dataclasses.dataclass(frozen=True, eq=False)
class FitReport:
    """
    The result of fitting one model to one sample.

    Attributes
    ----------
    model : ModelKind

    method : Method

    n : int
        Sample size.

    estimates : dict
        Parameter name to estimate, in the order of the Fisher matrix.

    std_errors : dict
        Parameter name to asymptotic standard error. Parameters estimated
        without a likelihood-based standard error (the conditional mean
        estimate of theta) are absent.

    fisher : numpy.ndarray
        Expected (or, for the beta competitor, observed) information matrix
        at the estimates.

    log_lik : float
        Log-likelihood at the estimates.

    ci : dict
        Parameter name to `ConfidenceInterval`.

    flags : tuple of str
        Warnings raised while fitting, such as ``'bcmle_fallback'`` or
        ``'ci_outside_parameter_space:theta'``.
    """
    model: ModelKind
    method: Method
    n: int
    estimates: Dict[str, float]
    std_errors: Dict[str, float]
    fisher: np.ndarray
    log_lik: float
    ci: Dict[str, ConfidenceInterval] = dataclasses.field(default_factory=dict)
    flags: Tuple[str, ...] = ()

    @property
    def parameters(self) -> Tuple[str, ...]:
        return tuple(self.estimates)


def score_theta(theta: float, m: int, S: float) -> float:
    """Score of the interior log-likelihood: ``m (2 + theta) / (theta (1 + theta)) - S``."""
    return m * (2.0 + theta) / (theta * (1.0 + theta)) - S


def theta_mle(m: int, S: float) -> float:
    """
    The maximum likelihood estimate of theta from the interior statistics.

    The positive root of ``S theta^2 + (S - m) theta - 2 m = 0``:

        theta = ((m - S) + sqrt((m - S)^2 + 8 m S)) / (2 S)

    evaluated in the rationalized form when ``m < S`` to avoid cancellation.

    Raises
    ------
    NoInteriorDataError
        If there are no interior observations.
    """
    if m < 1 or not S > 0:
        raise NoInteriorDataError(
            'theta cannot be estimated without interior observations'
        )
    m = float(m)
    root = math.sqrt((m - S) ** 2 + 8.0 * m * S)
    if m >= S:
        theta = ((m - S) + root) / (2.0 * S)
    else:
        theta = 4.0 * m / ((S - m) + root)

    residual = score_theta(theta, m, S)
    tolerance = SCORE_TOLERANCE * m + 64 * np.finfo(float).eps * S
    if abs(residual) > tolerance:
        raise EstimationError(
            f'theta={theta!r} fails the score check (U={residual!r})'
        )
    return theta


def cox_snell_bias(theta: float, m: int) -> float:
    """
    First-order Cox-Snell bias of the theta MLE, conditional on ``m``.

    Given ``m`` the interior log-likelihood ``m log(theta^2 / (1 + theta)) -
    theta S`` has non-random second and third derivatives, so the bias is
    ``l'''(theta) / (2 l''(theta)^2)`` with

        l''  = m (1 / (1 + theta)^2 - 2 / theta^2)
        l''' = m (4 / theta^3 - 2 / (1 + theta)^3)
    """
    second = m * (1.0 / (1.0 + theta) ** 2 - 2.0 / theta ** 2)
    third = m * (4.0 / theta ** 3 - 2.0 / (1.0 + theta) ** 3)
    return third / (2.0 * second * second)


def bias_corrected_theta(m: int, S: float) -> Tuple[float, bool]:
    """
    The Cox-Snell bias-corrected estimate of theta.

    Returns
    -------
    theta : float
        ``theta_mle - bias(theta_mle)``, or the uncorrected estimate when the
        correction would make it non-positive.

    fallback : bool
        True if the uncorrected estimate was returned.
    """
    theta = theta_mle(m, S)
    corrected = theta - cox_snell_bias(theta, m)
    if corrected <= 0.0:
        logger.warning(
            'Bias correction gives a non-positive theta (%g) with m=%d; '
            'using the uncorrected estimate %g', corrected, m, theta
        )
        return theta, True
    return corrected, False


def bcmle_theta(sample: ProportionSample) -> float:
    """Bias-corrected maximum likelihood estimate of theta."""
    return bias_corrected_theta(sample.m, sample.S)[0]


def cme_theta(sample: ProportionSample) -> float:
    """
    Conditional mean estimate of theta.

    The interior observations have mean ``1 / (1 + theta)`` whatever the
    inflation parameters, so ``theta = 1 / mean - 1``.
    """
    if sample.m == 0:
        raise NoInteriorDataError(
            'theta cannot be estimated without interior observations'
        )
    theta = 1.0 / sample.interior_mean - 1.0
    if not theta > 0:
        raise EstimationError(
            f'Interior mean {sample.interior_mean!r} gives no positive theta'
        )
    return theta


def _k_theta_theta(theta: float, weight: float) -> float:
    return (weight * (theta * theta + 4.0 * theta + 2.0)
            / (theta * theta * (1.0 + theta) ** 2))


def fisher_inflated(params: InflatedParams, n: int) -> np.ndarray:
    """
    Fisher information of ULZI / ULOI for ``n`` observations, ordered
    (alpha, theta)::

        k_aa = n / (alpha (1 - alpha))
        k_tt = n (1 - alpha) (theta^2 + 4 theta + 2) / (theta^2 (1 + theta)^2)
    """
    alpha, theta = params.alpha, params.theta
    return np.array([
        [n / (alpha * (1.0 - alpha)), 0.0],
        [0.0, _k_theta_theta(theta, n * (1.0 - alpha))],
    ])


def fisher_zoi(params: ZeroOneInflatedParams, n: int) -> np.ndarray:
    """Fisher information of ULZOI for ``n`` observations, ordered (alpha, p, theta)."""
    alpha, p, theta = params.alpha, params.p, params.theta
    return np.diag([
        n / (alpha * (1.0 - alpha)),
        n * alpha / (p * (1.0 - p)),
        _k_theta_theta(theta, n * (1.0 - alpha)),
    ])


def standard_errors(fisher: np.ndarray, names: Sequence[str]) -> Dict[str, float]:
    """Standard errors from the diagonal of the inverse information matrix."""
    covariance = np.linalg.inv(fisher)
    return {
        name: float(math.sqrt(covariance[idx, idx]))
        for idx, name in enumerate(names)
    }


def z_value(level: float) -> float:
    """The two-sided standard normal quantile for ``level``."""
    if not 0.5 < level < 1.0:
        raise DomainError(f'Confidence level must lie in (0.5, 1) (got {level!r})')
    return float(stats.norm.ppf(0.5 + level / 2.0))


def confidence_intervals(report: FitReport, level: float) -> FitReport:
    """
    Attach Wald intervals ``estimate +/- z SE`` at ``level``.

    Intervals are not truncated to the parameter space; intervals which leave
    it are flagged.
    """
    z = z_value(level)
    ci = {}
    flags = [flag for flag in report.flags
             if not flag.startswith('ci_outside_parameter_space')]
    for name, se in report.std_errors.items():
        estimate = report.estimates[name]
        interval = ConfidenceInterval(estimate - z * se, estimate + z * se, level)
        ci[name] = interval
        lo, hi = PARAMETER_SPACE.get(name, (-math.inf, math.inf))
        if interval.lo <= lo or interval.hi >= hi:
            logger.warning(
                'The %g%% interval for %s (%g, %g) leaves the parameter space',
                100 * level, name, interval.lo, interval.hi
            )
            flags.append(f'ci_outside_parameter_space:{name}')
    return dataclasses.replace(report, ci=ci, flags=tuple(flags))


def _atom_count(sample: ProportionSample, point: InflationPoint) -> int:
    return sample.n0 if point is InflationPoint.ZERO else sample.n1


def mle_inflated(sample: ProportionSample, point: InflationPoint,
                 level: Optional[float] = DEFAULT_LEVEL) -> FitReport:
    """
    Maximum likelihood fit of ULZI (``point=ZERO``) or ULOI (``point=ONE``).

    ``alpha`` is the proportion of observations at the inflation point and
    theta is the closed-form root of its score equation.

    Raises
    ------
    ModelMismatchError
        If the sample holds observations at the opposite end point.

    BoundaryError
        If none or all of the observations lie at the inflation point.
    """
    model = ModelKind.ULZI if point is InflationPoint.ZERO else ModelKind.ULOI
    opposite = _atom_count(sample, point.opposite)
    if opposite:
        endpoint = 'ones' if point is InflationPoint.ZERO else 'zeros'
        raise ModelMismatchError(
            f'Sample contains {opposite} exact {endpoint}, which '
            f'{model.value} cannot produce',
            hint=f'sample contains {endpoint}; fit ULZOI',
        )

    at_c = _atom_count(sample, point)
    if at_c == 0:
        raise BoundaryError(
            f'No observations at {point.c:g}; the inflation proportion would '
            f'be 0'
        )
    if at_c == sample.n:
        raise BoundaryError(
            f'All observations are at {point.c:g}; the inflation proportion '
            f'would be 1'
        )

    params = InflatedParams(at_c / sample.n, theta_mle(sample.m, sample.S), point)
    return _make_report(model, Method.MLE, params, sample, level)


def mle_zoi(sample: ProportionSample,
            level: Optional[float] = DEFAULT_LEVEL) -> FitReport:
    """
    Maximum likelihood fit of ULZOI.

    ``alpha = (n0 + n1) / n``, ``p = n1 / (n0 + n1)`` and theta as for the
    single-inflated models.
    """
    atoms = sample.n0 + sample.n1
    if atoms == 0:
        raise BoundaryError('No observations at 0 or 1; alpha would be 0')
    if atoms == sample.n:
        raise BoundaryError('All observations are at 0 or 1; alpha would be 1')
    if sample.n1 == 0:
        raise BoundaryError(
            'No observations at 1, so p would be 0; fit ULZI instead'
        )
    if sample.n0 == 0:
        raise BoundaryError(
            'No observations at 0, so p would be 1; fit ULOI instead'
        )

    params = ZeroOneInflatedParams(
        alpha=atoms / sample.n,
        p=sample.n1 / atoms,
        theta=theta_mle(sample.m, sample.S),
    )
    return _make_report(ModelKind.ULZOI, Method.MLE, params, sample, level)


def _estimates(params: AnyInflatedParams) -> Dict[str, float]:
    if isinstance(params, ZeroOneInflatedParams):
        return {'alpha': params.alpha, 'p': params.p, 'theta': params.theta}
    return {'alpha': params.alpha, 'theta': params.theta}


def _make_report(model: ModelKind, method: Method, params: AnyInflatedParams,
                 sample: ProportionSample, level: Optional[float],
                 flags: Tuple[str, ...] = ()) -> FitReport:
    if isinstance(params, ZeroOneInflatedParams):
        fisher = fisher_zoi(params, sample.n)
    else:
        fisher = fisher_inflated(params, sample.n)

    estimates = _estimates(params)
    std_errors = standard_errors(fisher, list(estimates))
    if method is Method.CME:
        del std_errors['theta']

    report = FitReport(
        model=model,
        method=method,
        n=sample.n,
        estimates=estimates,
        std_errors=std_errors,
        fisher=fisher,
        log_lik=log_likelihood(params, sample),
        flags=flags,
    )
    if level is not None:
        report = confidence_intervals(report, level)
    return report


def fitted_params(report: FitReport) -> AnyInflatedParams:
    """The unit Lindley parameter bundle of a fitted report."""
    est = report.estimates
    if report.model is ModelKind.ULZOI:
        return ZeroOneInflatedParams(est['alpha'], est['p'], est['theta'])
    if report.model is ModelKind.ULZI:
        return InflatedParams(est['alpha'], est['theta'], InflationPoint.ZERO)
    if report.model is ModelKind.ULOI:
        return InflatedParams(est['alpha'], est['theta'], InflationPoint.ONE)
    raise UsageError(f'{report.model.value} is not a unit Lindley model')


def fit_unit_lindley(sample: ProportionSample, model: ModelKind,
                     method: Method = Method.MLE,
                     level: Optional[float] = DEFAULT_LEVEL) -> FitReport:
    """
    Fit ULZI, ULOI or ULZOI with the given method for theta.

    The inflation parameters are always estimated by maximum likelihood;
    ``method`` selects the estimator of theta.
    """
    if model is ModelKind.ULZOI:
        report = mle_zoi(sample, level=None)
    elif model is ModelKind.ULZI:
        report = mle_inflated(sample, InflationPoint.ZERO, level=None)
    elif model is ModelKind.ULOI:
        report = mle_inflated(sample, InflationPoint.ONE, level=None)
    else:
        raise UsageError(f'{model.value} is not a unit Lindley model')

    flags = ()
    if method is Method.BCMLE:
        theta, fallback = bias_corrected_theta(sample.m, sample.S)
        if fallback:
            flags = ('bcmle_fallback', )
    elif method is Method.CME:
        theta = cme_theta(sample)
    else:
        if level is not None:
            report = confidence_intervals(report, level)
        return report

    params = dataclasses.replace(fitted_params(report), theta=theta)
    report = _make_report(model, method, params, sample, level, flags=flags)
    logger.info('%s %s fit: %s', model.value, method.value, report.estimates)
    return report
