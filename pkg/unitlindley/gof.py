"""
Empirical distribution functions and the Kolmogorov-Smirnov distance for
models with atoms at 0 and 1.
"""
import dataclasses
import enum
import logging
from typing import Callable, Dict, List

import numpy as np

from .exceptions import InvalidCdfError
from .proportions import ProportionSample
from .unit_lindley import ArrayLike, maybe_scalar

logger = logging.getLogger(__name__)

CdfFunction = Callable[[np.ndarray], np.ndarray]

# Slack allowed for round-off when checking a model cdf for monotonicity.
MONOTONE_SLACK = 1e-12


class KsSide(enum.Enum):
    """Which side of a jump point attains the supremum."""
    LEFT_LIMIT = 'left'
    RIGHT_VALUE = 'right'


@dataclasses.dataclass(frozen=True)
class KsResult:
    """
    Kolmogorov-Smirnov distance between a sample and a model.

    Attributes
    ----------
    statistic : float
        sup |F_n(x) - F(x)|.

    at : float
        Location of the supremum.

    side : KsSide
        Whether the supremum is the left limit at ``at`` or the value there.
    """
    statistic: float
    at: float
    side: KsSide


def empirical_cdf(sample: ProportionSample, x: ArrayLike) -> ArrayLike:
    """Right-continuous empirical distribution function, #(values <= x) / n."""
    x = np.asarray(x, dtype=float)
    counts = np.searchsorted(sample.sorted_values, x, side='right')
    return maybe_scalar(counts / sample.n)


def _left_limits(points: np.ndarray) -> np.ndarray:
    return np.nextafter(points, -np.inf)


def ks_statistic(sample: ProportionSample, model_cdf: CdfFunction) -> KsResult:
    """
    Kolmogorov-Smirnov statistic for a possibly mixed model.

    Between consecutive sample values the empirical function is constant and
    the model function is nondecreasing, so the supremum is attained either at
    a sample value or as the left limit at a sample value. Both are evaluated
    for every unique sample value; left limits are evaluated one ulp below,
    which picks up atoms of the model. The candidates at 0- and 1 are added.

    Parameters
    ----------
    sample : ProportionSample

    model_cdf : callable
        Vectorized, right-continuous distribution function on [0, 1].

    Raises
    ------
    InvalidCdfError
        If ``model_cdf`` decreases or leaves [0, 1] on the evaluation points.
    """
    unique = np.unique(np.concatenate([sample.sorted_values, [1.0]]))
    left = _left_limits(unique)

    n = sample.n
    ecdf_right = np.searchsorted(sample.sorted_values, unique, side='right') / n
    ecdf_left = np.searchsorted(sample.sorted_values, unique, side='left') / n

    model_right = np.asarray(model_cdf(unique), dtype=float)
    model_left = np.asarray(model_cdf(left), dtype=float)
    below_zero = float(np.asarray(model_cdf(np.nextafter(0.0, -np.inf))))

    interleaved = np.empty(2 * unique.size + 1)
    interleaved[0] = below_zero
    interleaved[1::2] = model_left
    interleaved[2::2] = model_right
    if (np.any(np.diff(interleaved) < -MONOTONE_SLACK)
            or np.any(interleaved < -MONOTONE_SLACK)
            or np.any(interleaved > 1.0 + MONOTONE_SLACK)
            or not np.all(np.isfinite(interleaved))):
        raise InvalidCdfError(
            'Model distribution function is not a nondecreasing function '
            'into [0, 1] on the evaluation points'
        )

    gap_right = np.abs(ecdf_right - model_right)
    gap_left = np.abs(ecdf_left - model_left)
    best_right = int(np.argmax(gap_right))
    best_left = int(np.argmax(gap_left))

    result = KsResult(abs(below_zero), 0.0, KsSide.LEFT_LIMIT)
    if gap_left[best_left] > result.statistic:
        result = KsResult(float(gap_left[best_left]), float(unique[best_left]),
                          KsSide.LEFT_LIMIT)
    if gap_right[best_right] > result.statistic:
        result = KsResult(float(gap_right[best_right]),
                          float(unique[best_right]), KsSide.RIGHT_VALUE)
    logger.debug('KS statistic %g at %g (%s)', result.statistic, result.at,
                 result.side.value)
    return result


def distribution_comparison(sample: ProportionSample,
                            model_cdfs: Dict[str, CdfFunction]) -> List[dict]:
    """
    Observed and fitted distribution functions at the unique sample values.

    Returns one row per unique value with keys ``x``, ``observed`` and one key
    per entry of ``model_cdfs``.
    """
    unique = np.unique(sample.values)
    columns = {
        'x': unique,
        'observed': np.asarray(empirical_cdf(sample, unique), dtype=float),
    }
    for name, cdf in model_cdfs.items():
        columns[name] = np.asarray(cdf(unique), dtype=float)
    return [
        {key: float(values[idx]) for key, values in columns.items()}
        for idx in range(unique.size)
    ]
