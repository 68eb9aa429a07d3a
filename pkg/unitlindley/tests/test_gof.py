import dataclasses

import numpy as np
import pytest

from unitlindley import unit_lindley
from unitlindley.exceptions import InvalidCdfError
from unitlindley.gof import (KsSide, distribution_comparison, empirical_cdf,
                             ks_statistic)
from unitlindley.inflated import (InflatedParams, InflationPoint,
                                  ZeroOneInflatedParams, model_cdf,
                                  sample_model)
from unitlindley.proportions import suff_stats
from unitlindley.unit_lindley import UnitLindleyParams


def brute_force_ks(values, cdf):
    """sup |F_n - F| over a dense grid plus both sides of every value."""
    values = np.sort(np.asarray(values))
    points = np.concatenate([
        np.linspace(-0.01, 1.0, 20001),
        values,
        np.nextafter(values, -np.inf),
        [np.nextafter(1.0, 0.0), 1.0],
    ])
    ecdf = np.searchsorted(values, points, side='right') / values.size
    return float(np.max(np.abs(ecdf - cdf(points))))


def test_empirical_cdf():
    sample = suff_stats([0.0, 0.5, 0.5, 1.0])
    np.testing.assert_allclose(empirical_cdf(sample, [-1, 0, 0.4, 0.5, 0.99, 1]),
                               [0, 0.25, 0.25, 0.75, 0.75, 1.0])
    assert empirical_cdf(sample, 0.5) == 0.75


def test_single_interior_observation():
    params = UnitLindleyParams(1.0)
    cdf = lambda y: unit_lindley.cdf(params, y)  # noqa: E731
    result = ks_statistic(suff_stats([0.5]), cdf)
    f = unit_lindley.cdf(params, 0.5)
    assert result.statistic == pytest.approx(max(f, 1 - f))


def test_exact_model_atoms():
    # The fitted model puts exactly the sample's mass on 0.
    sample = suff_stats([0.0, 0.0, 0.3, 0.6])
    params = InflatedParams(0.5, 2.0)
    result = ks_statistic(sample, model_cdf(params))
    assert result.statistic == pytest.approx(
        brute_force_ks(sample.values, model_cdf(params)), abs=1e-12)


def test_atom_mismatch_left_limit():
    # A sample without zeros against a model with an atom at 0: the gap at 0
    # is the full atom.
    sample = suff_stats([0.4, 0.5, 0.6])
    params = InflatedParams(0.3, 1.0)
    result = ks_statistic(sample, model_cdf(params))
    assert result.statistic >= 0.3


def test_missing_atom_at_one():
    # Model without mass at 1 but the sample has ones.
    sample = suff_stats([0.2, 1.0, 1.0, 1.0])
    params = InflatedParams(0.1, 5.0)
    result = ks_statistic(sample, model_cdf(params))
    assert result.at == 1.0
    assert result.side is KsSide.LEFT_LIMIT
    assert result.statistic == pytest.approx(
        abs(0.25 - model_cdf(params)(np.nextafter(1.0, 0.0))))


@pytest.mark.parametrize('params', [
    InflatedParams(0.2, 7.0),
    InflatedParams(0.5, 0.25),
    InflatedParams(0.2, 1.0, InflationPoint.ONE),
    ZeroOneInflatedParams(0.3, 0.5, 0.56),
    ZeroOneInflatedParams(0.5, 0.3, 1.0),
])
@pytest.mark.parametrize('seed', range(10))
def test_matches_brute_force(params, seed):
    values = sample_model(params, 40, np.random.default_rng(seed))
    sample = suff_stats(values)
    # Fit-like perturbation so the model and the data differ.
    other = dataclasses.replace(params, theta=params.theta * 1.3)
    cdf = model_cdf(other)
    result = ks_statistic(sample, cdf)
    assert result.statistic == pytest.approx(brute_force_ks(values, cdf), abs=1e-12)
    assert 0 <= result.statistic <= 1


def test_rejects_decreasing_cdf():
    sample = suff_stats([0.2, 0.5])
    with pytest.raises(InvalidCdfError):
        ks_statistic(sample, lambda y: 1.0 - np.clip(np.asarray(y), 0, 1))


def test_rejects_out_of_range_cdf():
    sample = suff_stats([0.2, 0.5])
    with pytest.raises(InvalidCdfError):
        ks_statistic(sample, lambda y: 2.0 * np.clip(np.asarray(y), 0, 1))


def test_distribution_comparison():
    sample = suff_stats([0.0, 0.2, 0.2, 0.7])
    params = InflatedParams(0.25, 1.0)
    rows = distribution_comparison(sample, {'ULZI': model_cdf(params)})
    assert [row['x'] for row in rows] == [0.0, 0.2, 0.7]
    assert [row['observed'] for row in rows] == [0.25, 0.75, 1.0]
    assert rows[0]['ULZI'] == pytest.approx(0.25)
    assert set(rows[0]) == {'x', 'observed', 'ULZI'}


@pytest.mark.slow
def test_statistic_shrinks_under_the_true_model():
    params = ZeroOneInflatedParams(0.3, 0.5, 0.56)
    cdf = model_cdf(params)
    statistics = [
        ks_statistic(suff_stats(sample_model(params, 10_000,
                                             np.random.default_rng(seed))),
                     cdf).statistic
        for seed in range(100)
    ]
    assert sum(statistic < 0.02 for statistic in statistics) >= 99
