"""
Monte Carlo studies of the estimators: bias, mean squared error and Wald
interval coverage over replicated samples.

Replication ``r`` at sample size ``n`` draws from its own random stream,
seeded with ``replication_seed(base_seed, n, r)``::

    pair = (n + r) (n + r + 1) / 2 + r          # Cantor pairing
    seed = splitmix64(base_seed XOR pair)

so results do not depend on the order, or the process, in which
replications run.
"""
import concurrent.futures
import dataclasses
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import inflection
import numpy as np
import pandas as pd
import tabulate
from scipy import stats

from .estimation import (Method, ModelKind, bcmle_theta, cme_theta,
                         fit_unit_lindley, z_value)
from .exceptions import EstimationError, SimulationError, SpecError
from .inflated import (AnyInflatedParams, InflatedParams, InflationPoint,
                       ZeroOneInflatedParams, sample_model)
from .proportions import suff_stats

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1

DEFAULT_SAMPLE_SIZES = (25, 30, 50, 100, 200, 500, 1000)
DEFAULT_LEVELS = (0.90, 0.95)
ULZI_GRID = (
    InflatedParams(alpha=0.2, theta=7.0),
    InflatedParams(alpha=0.2, theta=1.0),
    InflatedParams(alpha=0.2, theta=0.14),
    InflatedParams(alpha=0.5, theta=4.0),
    InflatedParams(alpha=0.5, theta=0.25),
)
ULZOI_GRID = (
    ZeroOneInflatedParams(alpha=0.3, p=0.3, theta=1.26),
    ZeroOneInflatedParams(alpha=0.3, p=0.5, theta=0.56),
    ZeroOneInflatedParams(alpha=0.5, p=0.3, theta=1.0),
    ZeroOneInflatedParams(alpha=0.5, p=0.5, theta=0.43),
)

THETA_ESTIMATORS = (Method.MLE, Method.BCMLE, Method.CME)

CSV_COLUMNS = [
    'model', 'param', 'n', 'estimator', 'mean', 'bias', 'mse', 'rmse',
    'coverage_level', 'coverage', 'failures', 'mean_ci_lo', 'mean_ci_hi',
]


def splitmix64(value: int) -> int:
    """The splitmix64 output function: a bijection on 64-bit integers."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replication_seed(base_seed: int, n: int, r: int) -> int:
    """Seed of replication ``r`` at sample size ``n``."""
    pair = (n + r) * (n + r + 1) // 2 + r
    return splitmix64((base_seed ^ pair) & MASK64)


@dataclasses.dataclass(frozen=True)
class SimulationSpec:
    """
    Configuration of a Monte Carlo study.

    Parameters
    ----------
    model : ModelKind
        ``ModelKind.ULZI`` or ``ModelKind.ULZOI``.

    true_params : InflatedParams or ZeroOneInflatedParams
        The generating parameters.

    sample_sizes : sequence of int
        Sample sizes, each at least 2.

    replications : int
        Replications per sample size.

    base_seed : int
        64-bit base seed.

    ci_levels : sequence of float
        Confidence levels for the coverage study, each in (0.5, 1).
    """
    model: ModelKind
    true_params: AnyInflatedParams
    sample_sizes: Tuple[int, ...] = DEFAULT_SAMPLE_SIZES
    replications: int = 1000
    base_seed: int = 0
    ci_levels: Tuple[float, ...] = DEFAULT_LEVELS

    def __post_init__(self):
        object.__setattr__(self, 'sample_sizes',
                           tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, 'ci_levels',
                           tuple(float(level) for level in self.ci_levels))

        if self.model is ModelKind.ULZI:
            if not (isinstance(self.true_params, InflatedParams)
                    and self.true_params.point is InflationPoint.ZERO):
                raise SpecError('ULZI studies need zero-inflated parameters')
        elif self.model is ModelKind.ULZOI:
            if not isinstance(self.true_params, ZeroOneInflatedParams):
                raise SpecError('ULZOI studies need zero-and-one-inflated '
                                'parameters')
        else:
            raise SpecError(f'Simulation studies support ULZI and ULZOI, '
                            f'not {self.model.value}')
        if self.replications < 1:
            raise SpecError('At least one replication is required')
        if not self.sample_sizes or min(self.sample_sizes) < 2:
            raise SpecError('Sample sizes must be at least 2')
        if any(not 0.5 < level < 1.0 for level in self.ci_levels):
            raise SpecError('Confidence levels must lie in (0.5, 1)')
        if not 0 <= self.base_seed <= MASK64:
            raise SpecError('The base seed must be a 64-bit unsigned integer')

    @property
    def parameters(self) -> Tuple[str, ...]:
        if self.model is ModelKind.ULZOI:
            return ('theta', 'alpha', 'p')
        return ('theta', 'alpha')

    @property
    def truth(self) -> Dict[str, float]:
        return {name: getattr(self.true_params, name) for name in self.parameters}


@dataclasses.dataclass(frozen=True)
class ReplicationResult:
    """Estimates and Wald intervals from one replication, or its failure."""
    n: int
    r: int
    estimates: Dict[Tuple[str, str], float]
    intervals: Dict[Tuple[str, float], Tuple[float, float]]
    error: Optional[str] = None


def run_replication(spec: SimulationSpec, n: int, r: int) -> ReplicationResult:
    """Draw one sample and apply every estimator to it."""
    rng = np.random.default_rng(replication_seed(spec.base_seed, n, r))
    sample = suff_stats(sample_model(spec.true_params, n, rng))
    try:
        report = fit_unit_lindley(sample, spec.model, Method.MLE, level=None)
        estimates = {
            (name, Method.MLE.value): value
            for name, value in report.estimates.items()
        }
        estimates['theta', Method.BCMLE.value] = bcmle_theta(sample)
        estimates['theta', Method.CME.value] = cme_theta(sample)
    except EstimationError as ex:
        logger.debug('Replication n=%d r=%d failed: %s', n, r, ex)
        return ReplicationResult(n, r, {}, {}, error=str(ex))

    intervals = {}
    for level in spec.ci_levels:
        z = z_value(level)
        for name, se in report.std_errors.items():
            estimate = report.estimates[name]
            intervals[name, level] = (estimate - z * se, estimate + z * se)
    return ReplicationResult(n, r, estimates, intervals)


def _run_task(task: Tuple[SimulationSpec, int, int]) -> ReplicationResult:
    return run_replication(*task)


@dataclasses.dataclass(frozen=True)
class BiasRow:
    param: str
    n: int
    estimator: str
    mean: float
    bias: float
    mse: float
    rmse: float
    failures: int


@dataclasses.dataclass(frozen=True)
class CoverageRow:
    param: str
    n: int
    level: float
    coverage: float
    mean_ci: Tuple[float, float]
    failures: int


@dataclasses.dataclass(frozen=True, eq=False)
class SimulationTable:
    """
    Results of a Monte Carlo study.

    Attributes
    ----------
    spec : SimulationSpec

    bias_rows : list of BiasRow
        Mean, bias, MSE and RMSE per (parameter, n, estimator).

    coverage_rows : list of CoverageRow
        Coverage and mean interval per (parameter, n, level).

    failed_replications : dict
        Sample size to the number of replications excluded because the fit
        preconditions failed.

    theta_estimates : dict
        (n, estimator) to the array of successful theta estimates.
    """
    spec: Optional[SimulationSpec]
    bias_rows: List[BiasRow] = dataclasses.field(default_factory=list)
    coverage_rows: List[CoverageRow] = dataclasses.field(default_factory=list)
    failed_replications: Dict[int, int] = dataclasses.field(default_factory=dict)
    theta_estimates: Dict[Tuple[int, str], np.ndarray] = dataclasses.field(
        default_factory=dict)


def _collect(spec: SimulationSpec, workers: int) -> Dict[int, List[ReplicationResult]]:
    tasks = [(spec, n, r) for n in spec.sample_sizes
             for r in range(spec.replications)]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            chunksize = max(1, len(tasks) // (8 * workers))
            results = list(pool.map(_run_task, tasks, chunksize=chunksize))
    else:
        results = [_run_task(task) for task in tasks]

    by_n: Dict[int, List[ReplicationResult]] = {n: [] for n in spec.sample_sizes}
    for result in results:
        by_n[result.n].append(result)
    return by_n


def _bias_row(param: str, n: int, estimator: str, values: np.ndarray,
              truth: float, failures: int) -> BiasRow:
    errors = values - truth
    bias = float(np.mean(errors))
    # mean(e^2) >= mean(e)^2 holds exactly; max() removes round-off.
    mse = max(float(np.mean(errors * errors)), bias * bias)
    rmse = math.sqrt(mse)
    return BiasRow(param, n, estimator, float(np.mean(values)), bias, mse,
                   rmse, failures)


def run_study(spec: SimulationSpec, bias: bool = True, coverage: bool = True,
              workers: int = 1) -> SimulationTable:
    """
    Run the replications of ``spec`` and tabulate them.

    Replications whose sample violates a fit precondition (for example no
    zeros at all) are excluded from the aggregates and counted in
    ``failed_replications``.

    Raises
    ------
    SimulationError
        If every replication at some sample size failed.
    """
    by_n = _collect(spec, workers)
    truth = spec.truth
    table = SimulationTable(spec=spec)

    for n, results in by_n.items():
        successes = [result for result in results if result.error is None]
        failures = len(results) - len(successes)
        table.failed_replications[n] = failures
        if failures:
            logger.warning('%d of %d replications at n=%d excluded',
                           failures, len(results), n)
        if not successes:
            raise SimulationError(f'All {len(results)} replications at n={n} '
                                  f'failed')

        for estimator in THETA_ESTIMATORS:
            table.theta_estimates[n, estimator.value] = np.array(
                [result.estimates['theta', estimator.value]
                 for result in successes]
            )

        for param in spec.parameters:
            estimators = THETA_ESTIMATORS if param == 'theta' else (Method.MLE, )
            if bias:
                for estimator in estimators:
                    values = np.array([result.estimates[param, estimator.value]
                                       for result in successes])
                    table.bias_rows.append(_bias_row(
                        param, n, estimator.value, values, truth[param],
                        failures))
            if coverage:
                for level in spec.ci_levels:
                    bounds = np.array([result.intervals[param, level]
                                       for result in successes])
                    hits = ((bounds[:, 0] <= truth[param])
                            & (truth[param] <= bounds[:, 1]))
                    table.coverage_rows.append(CoverageRow(
                        param, n, level, float(np.mean(hits)),
                        (float(np.mean(bounds[:, 0])),
                         float(np.mean(bounds[:, 1]))),
                        failures))

    logger.info('%s study at %s: %d sample sizes x %d replications',
                spec.model.value, spec.true_params, len(spec.sample_sizes),
                spec.replications)
    return table


def run_bias_study(spec: SimulationSpec, workers: int = 1) -> SimulationTable:
    """Mean, bias, MSE and RMSE of MLE, BCMLE and CME per sample size."""
    return run_study(spec, bias=True, coverage=False, workers=workers)


def run_coverage_study(spec: SimulationSpec, workers: int = 1) -> SimulationTable:
    """Empirical coverage of the Wald intervals per sample size and level."""
    return run_study(spec, bias=False, coverage=True, workers=workers)


def table_frame(table: SimulationTable) -> pd.DataFrame:
    """The machine-readable long form of ``table``."""
    model = table.spec.model.value if table.spec is not None else ''
    rows = [
        {
            'model': model, 'param': row.param, 'n': row.n,
            'estimator': row.estimator, 'mean': row.mean, 'bias': row.bias,
            'mse': row.mse, 'rmse': row.rmse, 'failures': row.failures,
        }
        for row in table.bias_rows
    ] + [
        {
            'model': model, 'param': row.param, 'n': row.n,
            'estimator': Method.MLE.value, 'coverage_level': row.level,
            'coverage': row.coverage, 'failures': row.failures,
            'mean_ci_lo': row.mean_ci[0], 'mean_ci_hi': row.mean_ci[1],
        }
        for row in table.coverage_rows
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def _text_bias(table: SimulationTable) -> str:
    blocks = []
    for param in dict.fromkeys(row.param for row in table.bias_rows):
        rows = [row for row in table.bias_rows if row.param == param]
        estimators = list(dict.fromkeys(row.estimator for row in rows))
        by_key = {(row.n, row.estimator): row for row in rows}
        headers = ['n'] + [
            f'{stat} {estimator}'
            for stat in ('Mean', 'Bias', 'MSE', 'RMSE')
            for estimator in estimators
        ]
        body = []
        for n in dict.fromkeys(row.n for row in rows):
            line = [n]
            for stat in ('mean', 'bias', 'mse', 'rmse'):
                line.extend(getattr(by_key[n, estimator], stat)
                            for estimator in estimators)
            body.append(line)
        title = inflection.humanize(param)
        blocks.append(f'{title}\n' + tabulate.tabulate(
            body, headers=headers, floatfmt='.4f'))
    return '\n\n'.join(blocks)


def _text_coverage(table: SimulationTable) -> str:
    headers = ['Parameter', 'Level', 'n', 'Confidence interval', 'Coverage']
    body = [
        [inflection.humanize(row.param), f'{100 * row.level:g}%', row.n,
         f'({row.mean_ci[0]:.4f}, {row.mean_ci[1]:.4f})', 100 * row.coverage]
        for row in table.coverage_rows
    ]
    return tabulate.tabulate(body, headers=headers, floatfmt='.1f')


def emit_table(table: SimulationTable, fmt: str = 'text') -> str:
    """
    Render ``table`` as aligned text or CSV.

    Parameters
    ----------
    table : SimulationTable

    fmt : {'text', 'csv'}
        Text is aligned tables at 4 decimals; CSV
        follows `CSV_COLUMNS` with 17 significant digits.
    """
    if fmt == 'csv':
        return table_frame(table).to_csv(index=False, float_format='%.17g')

    parts = []
    if table.spec is not None:
        truth = ', '.join(f'{name}={value:g}' for name, value in table.spec.truth.items())
        parts.append(f'{table.spec.model.value} ({truth}), '
                     f'{table.spec.replications} replications')
    if table.bias_rows or not table.coverage_rows:
        parts.append(_text_bias(table) or tabulate.tabulate(
            [], headers=['n', 'Mean', 'Bias', 'MSE', 'RMSE']))
    if table.coverage_rows:
        parts.append(_text_coverage(table))
    if table.failed_replications:
        failed = ', '.join(f'n={n}: {count}'
                           for n, count in table.failed_replications.items())
        parts.append(f'Excluded replications: {failed}')
    return '\n\n'.join(parts) + '\n'


def estimator_density_frame(table: SimulationTable, points: int = 201) -> pd.DataFrame:
    """
    Gaussian kernel density of each theta estimator per sample size, as rows
    ``(n, estimator, theta, density)`` for external plotting.
    """
    rows = []
    for (n, estimator), values in table.theta_estimates.items():
        if values.size < 2 or np.ptp(values) == 0.0:
            continue
        kde = stats.gaussian_kde(values)
        grid = np.linspace(values.min(), values.max(), points)
        rows.extend(
            {'n': n, 'estimator': estimator, 'theta': theta, 'density': density}
            for theta, density in zip(grid, kde(grid))
        )
    return pd.DataFrame(rows, columns=['n', 'estimator', 'theta', 'density'])


def study_grid(model: ModelKind) -> Sequence[AnyInflatedParams]:
    """The standard parameter grid of ``model``."""
    if model is ModelKind.ULZOI:
        return ULZOI_GRID
    return ULZI_GRID
