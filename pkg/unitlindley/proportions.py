"""
Validated samples of proportions on [0, 1] with their cached statistics.
"""
import dataclasses
import functools
import logging
import math
from typing import Dict, Iterable

import numpy as np

from .exceptions import EmptyDataError, OutOfRangeError

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class ProportionSample:
    """
    A sample of proportions with the statistics every estimator needs.

    Atom membership uses exact comparison: only 0.0 and 1.0 count as
    endpoint observations.

    Attributes
    ----------
    values : numpy.ndarray
        The observations, in input order (read-only).

    n : int
        Sample size.

    n0, n1 : int
        Number of exact zeros and exact ones.

    m : int
        Number of interior observations, ``n - n0 - n1``.

    S : float
        Sum of y / (1 - y) over the interior observations.

    L : float
        Sum of log(1 - y) over the interior observations.
    """
    values: np.ndarray
    n: int
    n0: int
    n1: int
    m: int
    S: float
    L: float

    @functools.cached_property
    def interior(self) -> np.ndarray:
        """The interior observations, in input order."""
        mask = (self.values > 0.0) & (self.values < 1.0)
        return self.values[mask]

    @functools.cached_property
    def sorted_values(self) -> np.ndarray:
        """The observations sorted in ascending order."""
        return np.sort(self.values)

    @property
    def interior_mean(self) -> float:
        """Mean of the interior observations (nan if there are none)."""
        if self.m == 0:
            return math.nan
        return float(np.mean(self.interior))

    def describe(self) -> Dict[str, float]:
        """Descriptive statistics: extremes, mean, quartiles and atom counts."""
        q1, median, q3 = np.quantile(self.values, [0.25, 0.5, 0.75])
        return {
            'n': self.n,
            'zeros': self.n0,
            'ones': self.n1,
            'minimum': float(self.values.min()),
            'maximum': float(self.values.max()),
            'mean': float(self.values.mean()),
            'first_quartile': float(q1),
            'median': float(median),
            'third_quartile': float(q3),
        }


def suff_stats(values: Iterable[float]) -> ProportionSample:
    """
    Validate ``values`` and build a `ProportionSample`.

    Parameters
    ----------
    values : iterable of float
        Proportions in [0, 1].

    Raises
    ------
    EmptyDataError
        If no values were given.

    OutOfRangeError
        If a value is not finite or lies outside [0, 1]; carries the index
        of the first offending value.
    """
    if not isinstance(values, np.ndarray):
        values = list(values)
    array = np.array(values, dtype=float).ravel()
    if array.size == 0:
        raise EmptyDataError('A sample needs at least one observation')

    bad = ~((array >= 0.0) & (array <= 1.0))
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0])
        raise OutOfRangeError(
            f'Value {array[index]!r} at index {index} is outside [0, 1]',
            index=index,
        )

    array.setflags(write=False)
    zeros = array == 0.0
    ones = array == 1.0
    interior = array[~(zeros | ones)]
    return ProportionSample(
        values=array,
        n=int(array.size),
        n0=int(np.count_nonzero(zeros)),
        n1=int(np.count_nonzero(ones)),
        m=int(interior.size),
        S=float(np.sum(interior / (1.0 - interior))),
        L=float(np.sum(np.log1p(-interior))),
    )
