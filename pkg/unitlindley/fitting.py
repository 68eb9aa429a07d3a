"""
One entry point for fitting any of the supported model families.
"""
import logging
from typing import Optional

from .estimation import (DEFAULT_LEVEL, FitReport, Method, ModelKind,
                         fit_unit_lindley, fitted_params)
from .exceptions import UsageError
from .gof import CdfFunction, KsResult, ks_statistic
from .inflated import model_cdf
from .inflated_beta import (beta_inflated_cdf, fit_beta_inflated,
                            fitted_beta_params)
from .proportions import ProportionSample

logger = logging.getLogger(__name__)


def fit(sample: ProportionSample, model: ModelKind,
        method: Method = Method.MLE,
        level: Optional[float] = DEFAULT_LEVEL) -> FitReport:
    """
    Fit ``model`` to ``sample``.

    Parameters
    ----------
    sample : ProportionSample

    model : ModelKind

    method : Method, optional
        Estimator of theta. The inflated beta models support ``MLE`` only.

    level : float, optional
        Level of the attached Wald intervals; ``None`` attaches none.

    Raises
    ------
    UsageError
        If ``method`` does not apply to ``model``.
    """
    if model.is_unit_lindley:
        return fit_unit_lindley(sample, model, method, level)
    if method is not Method.MLE:
        raise UsageError(
            f'{method.value} estimates theta of the unit Lindley models only; '
            f'{model.value} is fitted by maximum likelihood'
        )
    return fit_beta_inflated(sample, model, level)


def fitted_cdf(report: FitReport) -> CdfFunction:
    """The distribution function of the fitted model."""
    if report.model.is_unit_lindley:
        return model_cdf(fitted_params(report))
    params = fitted_beta_params(report)
    return lambda y: beta_inflated_cdf(params, y)


def fitted_ks(sample: ProportionSample, report: FitReport) -> KsResult:
    """Kolmogorov-Smirnov distance between ``sample`` and its fitted model."""
    return ks_statistic(sample, fitted_cdf(report))
