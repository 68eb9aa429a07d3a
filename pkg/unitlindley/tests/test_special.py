import math

import numpy as np
import pytest
import scipy.special

from unitlindley import special
from unitlindley.exceptions import (ConvergenceError, DomainError,
                                    NoSignChangeError)
from unitlindley.special import (BracketedRootProblem, digamma,
                                 exp_integral_e1, exp_integral_e1_scaled,
                                 solve_bracketed, trigamma)

GRID = np.logspace(-3, 3, 61)
E1_GRID = np.sort(np.concatenate([np.logspace(-6, 2, 81), [0.999, 1.0, 1.001]]))


@pytest.mark.parametrize(
    'x, expected',
    [(1.0, 0.21938393439552029),
     (0.25, 1.0442826344437381)],
)
def test_e1_reference_values(x, expected):
    assert exp_integral_e1(x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize('x', E1_GRID)
def test_e1_matches_scipy(x):
    assert exp_integral_e1(x) == pytest.approx(scipy.special.exp1(x), rel=1e-12)


def test_e1_vanishes_monotonically():
    values = [exp_integral_e1(x) for x in E1_GRID]
    assert all(value > 0 for value in values)
    assert all(np.diff(values) < 0)
    assert exp_integral_e1(50.0) < 1e-20


@pytest.mark.parametrize('x', E1_GRID)
def test_e1_sandwich_bounds(x):
    lower = math.exp(-x) / 2 * math.log1p(2 / x)
    upper = math.exp(-x) * math.log1p(1 / x)
    assert lower < exp_integral_e1(x) < upper


@pytest.mark.parametrize('x', [0.01, 0.5, 1.0, 2.0, 20.0, 300.0])
def test_e1_scaled(x):
    expected = math.exp(x) * scipy.special.exp1(x)
    assert exp_integral_e1_scaled(x) == pytest.approx(expected, rel=1e-12)


def test_e1_scaled_large_argument():
    # exp(x) overflows here; e^x E1(x) ~ 1/x - 1/x^2 + 2/x^3
    x = 1e4
    assert exp_integral_e1_scaled(x) == pytest.approx(1 / x - 1 / x ** 2 + 2 / x ** 3,
                                                      rel=1e-10)


@pytest.mark.parametrize('func', [exp_integral_e1, exp_integral_e1_scaled,
                                  digamma, trigamma])
@pytest.mark.parametrize('x', [0.0, -1.0, math.inf, math.nan])
def test_domain_errors(func, x):
    with pytest.raises(DomainError):
        func(x)


def test_digamma_reference_values():
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-12)
    assert digamma(0.5) == pytest.approx(-1.9635100260214235, rel=1e-12)


@pytest.mark.parametrize('x', [0.5, 1.0, 2.0, 7.0])
def test_digamma_recurrence_points(x):
    assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, rel=1e-10)


def test_digamma_recurrence_grid():
    for x in GRID:
        assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, rel=1e-10)


def test_digamma_matches_scipy():
    for x in GRID:
        assert digamma(x) == pytest.approx(scipy.special.digamma(x), rel=1e-10, abs=1e-14)


def test_trigamma_reference_values():
    assert trigamma(1.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-12)
    assert trigamma(2.0) == pytest.approx(0.6449340668482264, rel=1e-12)


def test_trigamma_recurrence_and_scipy():
    for x in GRID:
        assert trigamma(x) > 0
        assert trigamma(x) - trigamma(x + 1) == pytest.approx(1 / x ** 2, rel=1e-10)
        assert trigamma(x) == pytest.approx(scipy.special.polygamma(1, x), rel=1e-10)


def test_solve_linear():
    problem = BracketedRootProblem(lambda x: x - 2.0, 0.0, 5.0, tolerance=1e-12)
    assert solve_bracketed(problem) == pytest.approx(2.0, abs=1e-12)


def test_solve_sqrt2():
    problem = BracketedRootProblem(lambda x: x * x - 2.0, 0.0, 2.0)
    root = solve_bracketed(problem)
    assert root == pytest.approx(1.4142135623730951, abs=1e-12)
    assert abs(problem.objective(root)) <= 1e-9 * 2.0


def test_solve_is_deterministic():
    problem = BracketedRootProblem(lambda x: math.cos(x) - x, 0.0, 1.0)
    assert solve_bracketed(problem) == solve_bracketed(problem)


def test_solve_root_at_endpoint():
    problem = BracketedRootProblem(lambda x: x, 0.0, 1.0)
    assert solve_bracketed(problem) == 0.0


def test_solve_no_sign_change():
    problem = BracketedRootProblem(lambda x: x * x + 1.0, -1.0, 1.0)
    with pytest.raises(NoSignChangeError):
        solve_bracketed(problem)


def test_bracket_must_be_ordered():
    with pytest.raises(DomainError, match='lo < hi'):
        BracketedRootProblem(lambda x: x, 1.0, 1.0)


def test_solve_iteration_cap(monkeypatch):
    monkeypatch.setattr(special, 'ROOT_MAX_ITERATIONS', 1)
    problem = BracketedRootProblem(lambda x: x * x - 2.0, 0.0, 2.0, tolerance=1e-14)
    with pytest.raises(ConvergenceError) as excinfo:
        solve_bracketed(problem)
    assert excinfo.value.iterations == 1
