import math

import numpy as np
import pytest
from scipy import integrate, optimize, special, stats

from unitlindley.estimation import Method, ModelKind
from unitlindley.exceptions import (BoundaryError, ModelMismatchError,
                                    NoInteriorDataError, ParameterError,
                                    UsageError)
from unitlindley.inflated_beta import (InflatedBetaParams,
                                       beta_inflated_cdf,
                                       beta_inflated_density,
                                       fit_beta_inflated, fit_interior_beta,
                                       fitted_beta_params,
                                       sample_beta_inflated)
from unitlindley.proportions import suff_stats


def test_params_validation():
    with pytest.raises(ParameterError):
        InflatedBetaParams(alpha=0.2, mu=1.0, phi=3.0)
    with pytest.raises(ParameterError):
        InflatedBetaParams(alpha=0.2, mu=0.5, phi=0.0)
    with pytest.raises(ParameterError):
        InflatedBetaParams(alpha=0.2, mu=0.5, phi=3.0, p=1.0)


def test_shape_parameters():
    params = InflatedBetaParams(alpha=0.2, mu=0.25, phi=8.0)
    assert (params.a, params.b) == (2.0, 6.0)
    assert params.kind is ModelKind.ZIB
    assert InflatedBetaParams(0.2, 0.25, 8.0, p=0.5).kind is ModelKind.ZOIB


def test_cdf_matches_scipy():
    params = InflatedBetaParams(alpha=0.3, mu=0.4, phi=5.0, p=0.2)
    y = np.linspace(0.01, 0.99, 25)
    expected = 0.3 * 0.8 + 0.7 * stats.beta.cdf(y, 2.0, 3.0)
    np.testing.assert_allclose(beta_inflated_cdf(params, y), expected, rtol=1e-12)
    assert beta_inflated_cdf(params, 0.0) == pytest.approx(0.24)
    assert beta_inflated_cdf(params, 1.0) == pytest.approx(1.0)
    assert beta_inflated_cdf(params, -0.1) == 0.0


def test_density():
    params = InflatedBetaParams(alpha=0.3, mu=0.4, phi=5.0, p=0.2)
    assert beta_inflated_density(params, 0.0) == pytest.approx(0.24)
    assert beta_inflated_density(params, 1.0) == pytest.approx(0.06)
    total, _ = integrate.quad(lambda y: beta_inflated_density(params, y), 0, 1)
    assert total == pytest.approx(0.7, abs=1e-9)


def test_sampler():
    params = InflatedBetaParams(alpha=0.3, mu=0.4, phi=5.0, p=0.2)
    draws = sample_beta_inflated(params, 200_000, np.random.default_rng(8))
    n = draws.size
    for value, prob in [(0.0, 0.24), (1.0, 0.06)]:
        assert abs(np.mean(draws == value) - prob) < 4 * math.sqrt(prob * (1 - prob) / n)
    interior = draws[(draws > 0) & (draws < 1)]
    assert abs(interior.mean() - 0.4) < 4 * math.sqrt(0.04 / interior.size)


def _scipy_beta_fit(values):
    def negative(x):
        logit_mu, log_phi = x
        mu, phi = special.expit(logit_mu), math.exp(log_phi)
        return -np.sum(stats.beta.logpdf(values, mu * phi, (1 - mu) * phi))

    result = optimize.minimize(negative, [0.0, 0.0], method='Nelder-Mead',
                               options={'xatol': 1e-10, 'fatol': 1e-12,
                                        'maxiter': 20000})
    logit_mu, log_phi = result.x
    return special.expit(logit_mu), math.exp(log_phi)


@pytest.mark.parametrize('a, b', [(2.0, 5.0), (0.5, 0.5), (30.0, 10.0)])
def test_interior_fit_matches_generic_optimizer(a, b):
    values = np.random.default_rng(21).beta(a, b, size=400)
    mu, phi, observed, loglik = fit_interior_beta(suff_stats(values))
    mu_ref, phi_ref = _scipy_beta_fit(values)
    assert mu == pytest.approx(mu_ref, rel=1e-4)
    assert phi == pytest.approx(phi_ref, rel=1e-4)
    assert loglik == pytest.approx(
        np.sum(stats.beta.logpdf(values, mu * phi, (1 - mu) * phi)), rel=1e-10)
    assert np.all(np.linalg.eigvalsh(observed) > 0)


def test_interior_fit_recovers_parameters():
    values = np.random.default_rng(3).beta(3.0, 9.0, size=20_000)
    mu, phi, _, _ = fit_interior_beta(suff_stats(values))
    assert mu == pytest.approx(0.25, abs=0.01)
    assert phi == pytest.approx(12.0, rel=0.05)


def test_interior_fit_needs_distinct_values():
    with pytest.raises(NoInteriorDataError):
        fit_interior_beta(suff_stats([0.0, 0.4, 0.4]))


def test_fit_zib():
    params = InflatedBetaParams(alpha=0.25, mu=0.6, phi=4.0)
    sample = suff_stats(sample_beta_inflated(params, 2000, np.random.default_rng(5)))
    report = fit_beta_inflated(sample, ModelKind.ZIB)
    assert report.model is ModelKind.ZIB
    assert report.method is Method.MLE
    assert report.parameters == ('alpha', 'mu', 'phi')
    assert report.estimates['alpha'] == sample.n0 / sample.n
    assert report.estimates['mu'] == pytest.approx(0.6, abs=0.03)
    assert all(se > 0 for se in report.std_errors.values())
    assert set(report.ci) == {'alpha', 'mu', 'phi'}
    assert fitted_beta_params(report).p is None


def test_fit_zoib():
    params = InflatedBetaParams(alpha=0.3, mu=0.4, phi=5.0, p=0.2)
    sample = suff_stats(sample_beta_inflated(params, 2000, np.random.default_rng(6)))
    report = fit_beta_inflated(sample, ModelKind.ZOIB, level=None)
    assert report.parameters == ('alpha', 'p', 'mu', 'phi')
    assert report.estimates['p'] == sample.n1 / (sample.n0 + sample.n1)
    assert report.ci == {}
    assert report.fisher.shape == (4, 4)
    assert fitted_beta_params(report).kind is ModelKind.ZOIB


def test_fit_errors():
    with pytest.raises(ModelMismatchError, match='ZOIB'):
        fit_beta_inflated(suff_stats([0.0, 0.3, 0.5, 1.0]), ModelKind.ZIB)
    with pytest.raises(BoundaryError):
        fit_beta_inflated(suff_stats([0.2, 0.3, 0.5]), ModelKind.ZIB)
    with pytest.raises(BoundaryError, match='fit ZIB instead'):
        fit_beta_inflated(suff_stats([0.0, 0.3, 0.5]), ModelKind.ZOIB)
    with pytest.raises(UsageError):
        fit_beta_inflated(suff_stats([0.0, 0.3, 0.5]), ModelKind.ULZI)
