import io
import math

import numpy as np
import pandas as pd
import pytest

from unitlindley.estimation import ModelKind
from unitlindley.exceptions import SimulationError, SpecError
from unitlindley.inflated import (InflatedParams, InflationPoint,
                                  ZeroOneInflatedParams)
from unitlindley.simulation import (CSV_COLUMNS, MASK64, ULZI_GRID,
                                    ULZOI_GRID, SimulationSpec,
                                    SimulationTable, emit_table,
                                    estimator_density_frame, replication_seed,
                                    run_bias_study, run_coverage_study,
                                    run_replication, run_study, splitmix64,
                                    table_frame)

ULZI_7 = InflatedParams(alpha=0.2, theta=7.0)


def small_spec(**kwargs) -> SimulationSpec:
    options = dict(model=ModelKind.ULZI, true_params=ULZI_7,
                   sample_sizes=(50, 100), replications=20, base_seed=42)
    options.update(kwargs)
    return SimulationSpec(**options)


def test_splitmix64_reference():
    # First outputs of the splitmix64 generator seeded with 0.
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert 0 <= splitmix64(MASK64) <= MASK64


def test_replication_seeds_are_distinct():
    seeds = {replication_seed(7, n, r) for n in (25, 30, 50, 100, 200, 500, 1000)
             for r in range(2000)}
    assert len(seeds) == 7 * 2000


def test_replication_seed_depends_on_base():
    assert replication_seed(1, 50, 3) != replication_seed(2, 50, 3)


@pytest.mark.parametrize('kwargs', [
    dict(replications=0),
    dict(sample_sizes=()),
    dict(sample_sizes=(1, 50)),
    dict(ci_levels=(0.4, )),
    dict(base_seed=-1),
    dict(model=ModelKind.ULZOI),
    dict(model=ModelKind.ZIB),
    dict(true_params=InflatedParams(0.2, 7.0, InflationPoint.ONE)),
])
def test_spec_validation(kwargs):
    with pytest.raises(SpecError):
        small_spec(**kwargs)


def test_spec_normalizes_sequences():
    spec = small_spec(sample_sizes=[50, 100], ci_levels=[0.9])
    assert spec.sample_sizes == (50, 100)
    assert spec.ci_levels == (0.9, )
    assert spec.truth == {'theta': 7.0, 'alpha': 0.2}


def test_replication_is_reproducible():
    spec = small_spec()
    first = run_replication(spec, 50, 3)
    second = run_replication(spec, 50, 3)
    assert first.estimates == second.estimates
    assert set(first.estimates) == {('alpha', 'MLE'), ('theta', 'MLE'),
                                    ('theta', 'BCMLE'), ('theta', 'CME')}
    assert set(first.intervals) == {('alpha', 0.9), ('alpha', 0.95),
                                    ('theta', 0.9), ('theta', 0.95)}


def test_bias_table_shape():
    table = run_bias_study(small_spec())
    # theta with three estimators and alpha with one, for two sample sizes
    assert len(table.bias_rows) == 2 * (3 + 1)
    assert table.coverage_rows == []
    for row in table.bias_rows:
        assert row.rmse >= abs(row.bias)
        assert row.rmse == math.sqrt(row.mse)


def test_coverage_table_shape():
    table = run_coverage_study(small_spec())
    assert table.bias_rows == []
    assert len(table.coverage_rows) == 2 * 2 * 2
    for row in table.coverage_rows:
        assert 0.0 <= row.coverage <= 1.0
        assert row.mean_ci[0] < row.mean_ci[1]


def test_study_is_deterministic():
    spec = small_spec()
    assert emit_table(run_study(spec), 'csv') == emit_table(run_study(spec), 'csv')


def test_parallel_matches_serial():
    spec = small_spec(replications=8)
    serial = emit_table(run_study(spec, workers=1), 'csv')
    parallel = emit_table(run_study(spec, workers=2), 'csv')
    assert serial == parallel


def test_failed_replications_are_counted():
    # With alpha small and n tiny many samples have no zeros at all.
    spec = small_spec(true_params=InflatedParams(0.05, 1.0), sample_sizes=(5, ),
                      replications=200)
    table = run_bias_study(spec)
    failures = table.failed_replications[5]
    # P(no zeros in 5 draws) = 0.95^5
    assert 0 < failures < 200
    assert all(row.failures == failures for row in table.bias_rows)
    assert abs(failures / 200 - 0.95 ** 5) < 4 * math.sqrt(0.2 / 200)


def test_all_failed_replications():
    spec = small_spec(true_params=InflatedParams(1e-9, 1.0), sample_sizes=(5, ),
                      replications=5)
    with pytest.raises(SimulationError, match='n=5'):
        run_study(spec)


def test_emit_csv():
    table = run_study(small_spec(sample_sizes=(50, ), replications=5))
    text = emit_table(table, 'csv')
    frame = pd.read_csv(io.StringIO(text))
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 4 + 4
    assert set(frame['estimator']) == {'MLE', 'BCMLE', 'CME'}
    bias = frame[frame['coverage_level'].isna()]
    np.testing.assert_allclose(bias['mse'], bias['rmse'] ** 2, rtol=1e-12)


def test_emit_csv_round_trips_values():
    table = run_bias_study(small_spec(sample_sizes=(50, ), replications=5))
    frame = pd.read_csv(io.StringIO(emit_table(table, 'csv')),
                        float_precision='round_trip')
    first = table.bias_rows[0]
    assert frame.loc[0, 'mean'] == first.mean
    assert frame.loc[0, 'bias'] == first.bias


def test_emit_empty_table():
    empty = SimulationTable(spec=None)
    assert emit_table(empty, 'csv').strip() == ','.join(CSV_COLUMNS)
    text = emit_table(empty, 'text')
    assert 'Mean' in text and 'RMSE' in text


def test_emit_text_layout():
    table = run_study(small_spec(replications=5))
    text = emit_table(table, 'text')
    assert 'Theta' in text and 'Alpha' in text
    assert 'Bias BCMLE' in text
    assert 'Coverage' in text
    # four decimals
    assert f'{table.bias_rows[0].mean:.4f}' in text


def test_table_frame_matches_rows():
    table = run_study(small_spec(replications=5))
    frame = table_frame(table)
    assert len(frame) == len(table.bias_rows) + len(table.coverage_rows)
    assert (frame['model'] == 'ULZI').all()


def test_estimator_density_frame():
    table = run_bias_study(small_spec(replications=30))
    frame = estimator_density_frame(table, points=11)
    assert list(frame.columns) == ['n', 'estimator', 'theta', 'density']
    assert len(frame) == 2 * 3 * 11
    assert (frame['density'] >= 0).all()


def test_ulzoi_study():
    spec = SimulationSpec(model=ModelKind.ULZOI, true_params=ULZOI_GRID[1],
                          sample_sizes=(100, ), replications=10, base_seed=1)
    table = run_study(spec)
    params = {row.param for row in table.bias_rows}
    assert params == {'theta', 'alpha', 'p'}


def test_study_grids():
    assert len(ULZI_GRID) == 5
    assert all(isinstance(params, ZeroOneInflatedParams) for params in ULZOI_GRID)


def _rows(table, param='theta', estimator='MLE'):
    return {row.n: row for row in table.bias_rows
            if row.param == param and row.estimator == estimator}


@pytest.mark.slow
def test_ulzi_theta_means_match_reference():
    spec = SimulationSpec(model=ModelKind.ULZI, true_params=ULZI_7,
                          sample_sizes=(50, 100, 500, 1000), replications=1000,
                          base_seed=20201017)
    table = run_bias_study(spec)
    estimates = table.theta_estimates
    reference = {50: 7.165, 100: 7.093, 500: 7.029}
    for n, row in _rows(table).items():
        values = estimates[n, 'MLE']
        mc_se = values.std(ddof=1) / math.sqrt(values.size)
        if n in reference:
            assert abs(row.mean - reference[n]) < 3 * mc_se
        else:
            assert abs(row.bias) < 0.05


@pytest.mark.slow
def test_bcmle_reduces_small_sample_bias():
    spec = SimulationSpec(model=ModelKind.ULZI, true_params=ULZI_7,
                          sample_sizes=(25, ), replications=1000,
                          base_seed=20201017)
    table = run_bias_study(spec)
    mle = _rows(table, estimator='MLE')[25]
    bcmle = _rows(table, estimator='BCMLE')[25]
    assert abs(bcmle.bias) < abs(mle.bias)
    assert mle.bias > 0


@pytest.mark.slow
@pytest.mark.parametrize('params', ULZI_GRID)
def test_bcmle_reduces_bias_across_grid(params):
    spec = SimulationSpec(model=ModelKind.ULZI, true_params=params,
                          sample_sizes=(25, ), replications=1000,
                          base_seed=20201017)
    table = run_bias_study(spec)
    mle = _rows(table, estimator='MLE')[25]
    bcmle = _rows(table, estimator='BCMLE')[25]
    assert abs(bcmle.bias) < abs(mle.bias)


@pytest.mark.slow
def test_alpha_and_theta_estimates_uncorrelated():
    spec = SimulationSpec(model=ModelKind.ULZI, true_params=ULZI_7,
                          sample_sizes=(500, ), replications=1000,
                          base_seed=20201017)
    results = [run_replication(spec, 500, r) for r in range(spec.replications)]
    alpha = [result.estimates['alpha', 'MLE'] for result in results]
    theta = [result.estimates['theta', 'MLE'] for result in results]
    assert abs(np.corrcoef(alpha, theta)[0, 1]) < 0.1


def _coverage(table, param, n, level=0.95):
    for row in table.coverage_rows:
        if (row.param, row.n, row.level) == (param, n, level):
            return row.coverage
    raise KeyError((param, n, level))


@pytest.mark.slow
def test_theta_coverage_near_nominal():
    spec = SimulationSpec(model=ModelKind.ULZI, true_params=ULZI_7,
                          sample_sizes=(100, 500), replications=1000,
                          base_seed=20201017, ci_levels=(0.95, ))
    table = run_coverage_study(spec)
    for n, reference in [(100, 0.94), (500, 0.952)]:
        coverage = _coverage(table, 'theta', n)
        assert abs(coverage - reference) < 0.02 + 2 * math.sqrt(0.95 * 0.05 / 1000)


@pytest.mark.slow
def test_small_theta_coverage_is_nominal():
    # Wald intervals with the expected information cover at close to the
    # nominal rate here as well.
    spec = SimulationSpec(model=ModelKind.ULZI, true_params=InflatedParams(0.5, 0.25),
                          sample_sizes=(500, ), replications=1000,
                          base_seed=20201017, ci_levels=(0.95, ))
    coverage = _coverage(run_coverage_study(spec), 'theta', 500)
    assert abs(coverage - 0.95) < 4 * math.sqrt(0.95 * 0.05 / 1000)


@pytest.mark.slow
def test_ulzoi_large_sample():
    spec = SimulationSpec(model=ModelKind.ULZOI,
                          true_params=ZeroOneInflatedParams(0.3, 0.5, 0.56),
                          sample_sizes=(1000, ), replications=1000,
                          base_seed=20201017, ci_levels=(0.95, ))
    table = run_study(spec)
    for row in table.bias_rows:
        if row.estimator != 'MLE':
            continue
        mc_se = math.sqrt(max(row.mse - row.bias ** 2, 0.0) / 1000)
        assert abs(row.bias) < max(0.0015, 3 * mc_se)
    coverage = _coverage(table, 'p', 1000)
    assert abs(coverage - 0.951) < 0.02 + 2 * math.sqrt(0.95 * 0.05 / 1000)
