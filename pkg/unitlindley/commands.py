"""
The commands behind the ``unitlindley`` command-line interface.

Each command takes already-validated inputs and returns the text it
writes to standard output; argument parsing lives in ``__main__``.
"""
import dataclasses
import logging
from typing import List, Optional

import inflection
import numpy as np
import pandas as pd
import tabulate

from .dataio import Dataset, frame_to_csv, write_values_csv
from .estimation import FitReport, Method, ModelKind
from .exceptions import EstimationError, UnitLindleyError, UsageError
from .fitting import fit, fitted_cdf, fitted_ks
from .gof import KsResult, distribution_comparison
from .inflated import (InflatedParams, InflationPoint, ZeroOneInflatedParams,
                       sample_model)
from .inflated_beta import InflatedBetaParams, sample_beta_inflated
from .proportions import ProportionSample
from .simulation import (SimulationSpec, emit_table, estimator_density_frame,
                         run_study)

logger = logging.getLogger(__name__)

TEXT_FLOAT_FORMAT = '.4f'
FORMATS = ('text', 'csv')


def check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise UsageError(f'Unknown format {fmt!r}; choose text or csv')
    return fmt


def _heading(name: str) -> str:
    return inflection.humanize(name)


def describe_table(sample: ProportionSample) -> str:
    """Descriptive statistics of ``sample`` as an aligned table."""
    summary = sample.describe()
    headers = [_heading(key) for key in summary]
    return tabulate.tabulate([list(summary.values())], headers=headers,
                             floatfmt=TEXT_FLOAT_FORMAT)


def report_frame(report: FitReport, ks: Optional[KsResult] = None) -> pd.DataFrame:
    """Long form of a fit: one row per parameter."""
    rows = []
    for name, estimate in report.estimates.items():
        ci = report.ci.get(name)
        rows.append({
            'model': report.model.value,
            'method': report.method.value,
            'param': name,
            'estimate': estimate,
            'std_error': report.std_errors.get(name, np.nan),
            'ci_level': ci.level if ci else np.nan,
            'ci_lo': ci.lo if ci else np.nan,
            'ci_hi': ci.hi if ci else np.nan,
            'log_lik': report.log_lik,
            'ks': ks.statistic if ks else np.nan,
        })
    return pd.DataFrame(rows)


def _report_text(report: FitReport, ks: KsResult) -> str:
    headers = ['Parameter', 'Estimate', 'SE']
    level = next(iter(report.ci.values())).level if report.ci else None
    if level is not None:
        headers.append(f'{100 * level:g}% CI')
    body = []
    for name, estimate in report.estimates.items():
        se = report.std_errors.get(name)
        line = [_heading(name), estimate, '' if se is None else se]
        if level is not None:
            ci = report.ci.get(name)
            line.append('-' if ci is None else f'({ci.lo:.4f}, {ci.hi:.4f})')
        body.append(line)

    lines = [
        f'{report.model.value} ({report.method.value}), n = {report.n}',
        tabulate.tabulate(body, headers=headers, floatfmt=TEXT_FLOAT_FORMAT),
        f'Log-likelihood: {report.log_lik:.4f}',
        f'K-S statistic: {ks.statistic:.4f} (at {ks.at:.4f}, {ks.side.value})',
    ]
    if report.flags:
        lines.append(f'Flags: {", ".join(report.flags)}')
    return '\n'.join(lines)


def cmd_fit(dataset: Dataset, model: ModelKind, method: Method = Method.MLE,
            level: float = 0.95, fmt: str = 'text') -> str:
    """
    Fit ``model`` to the dataset; report estimates, standard errors,
    intervals, log-likelihood and the KS distance of the fitted model.
    """
    sample = dataset.values
    report = fit(sample, model, method, level)
    ks = fitted_ks(sample, report)
    if check_format(fmt) == 'csv':
        return frame_to_csv(report_frame(report, ks))
    return '\n\n'.join([describe_table(sample), _report_text(report, ks)]) + '\n'


@dataclasses.dataclass(frozen=True)
class ComparisonEntry:
    """One model of a comparison: its fit, or why it could not be fitted."""
    model: ModelKind
    report: Optional[FitReport] = None
    ks: Optional[KsResult] = None
    error: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class ModelComparison:
    entries: List[ComparisonEntry]

    @property
    def fitted(self) -> List[ComparisonEntry]:
        return [entry for entry in self.entries if entry.error is None]

    @property
    def best(self) -> Optional[ComparisonEntry]:
        """The fitted model with the smallest KS statistic."""
        fitted = self.fitted
        if not fitted:
            return None
        return min(fitted, key=lambda entry: entry.ks.statistic)


def comparison_models(sample: ProportionSample) -> List[ModelKind]:
    """Unit Lindley and inflated beta variants matching the endpoint pattern."""
    if sample.n0 and sample.n1:
        return [ModelKind.ULZOI, ModelKind.ZOIB]
    if sample.n0:
        return [ModelKind.ULZI, ModelKind.ZIB]
    if sample.n1:
        raise UsageError(
            'Only ones are present; there is no one-inflated beta competitor. '
            'Use "fit --model uloi" instead'
        )
    raise UsageError('The data has no observations at 0 or 1; nothing is '
                     'inflated')


def compare_models(sample: ProportionSample, level: float = 0.95) -> ModelComparison:
    """
    Fit every model applicable to ``sample`` and compute their KS statistics.

    A model that fails to fit is recorded with its error; the others are
    still fitted.

    Raises
    ------
    EstimationError
        If no model could be fitted.
    """
    entries = []
    for model in comparison_models(sample):
        try:
            report = fit(sample, model, Method.MLE, level)
            ks = fitted_ks(sample, report)
        except UnitLindleyError as ex:
            logger.warning('%s could not be fitted: %s', model.value, ex)
            entries.append(ComparisonEntry(model, error=str(ex)))
        else:
            entries.append(ComparisonEntry(model, report, ks))

    comparison = ModelComparison(entries)
    if comparison.best is None:
        raise EstimationError(
            'No model could be fitted: ' + '; '.join(
                f'{entry.model.value}: {entry.error}' for entry in entries)
        )
    return comparison


def _comparison_frame(comparison: ModelComparison) -> pd.DataFrame:
    frames = []
    for entry in comparison.entries:
        if entry.report is None:
            frames.append(pd.DataFrame([{'model': entry.model.value,
                                         'error': entry.error}]))
        else:
            frames.append(report_frame(entry.report, entry.ks))
    frame = pd.concat(frames, ignore_index=True)
    if 'error' not in frame:
        frame['error'] = ''
    return frame.fillna({'error': ''})


def _comparison_text(comparison: ModelComparison) -> str:
    names = []
    for entry in comparison.fitted:
        names.extend(name for name in entry.report.estimates if name not in names)

    headers = [''] + [entry.model.value for entry in comparison.entries]
    body = []
    for name in names:
        body.append([_heading(name)] + [
            entry.report.estimates.get(name, '') if entry.report else ''
            for entry in comparison.entries
        ])
        body.append([f'SE({name})'] + [
            entry.report.std_errors.get(name, '') if entry.report else ''
            for entry in comparison.entries
        ])
    body.append(['Log-likelihood'] + [
        entry.report.log_lik if entry.report else ''
        for entry in comparison.entries
    ])
    body.append(['K-S statistic'] + [
        entry.ks.statistic if entry.ks else ''
        for entry in comparison.entries
    ])

    lines = [tabulate.tabulate(body, headers=headers, floatfmt=TEXT_FLOAT_FORMAT)]
    for entry in comparison.entries:
        if entry.error is not None:
            lines.append(f'{entry.model.value} not fitted: {entry.error}')
    best = comparison.best
    lines.append(f'Smaller K-S statistic: {best.model.value} '
                 f'({best.ks.statistic:.4f})')
    return '\n'.join(lines)


def cmd_compare(dataset: Dataset, level: float = 0.95, fmt: str = 'text') -> str:
    """Side-by-side fits of the unit Lindley and inflated beta variants."""
    comparison = compare_models(dataset.values, level)
    if check_format(fmt) == 'csv':
        return frame_to_csv(_comparison_frame(comparison))
    return '\n\n'.join([describe_table(dataset.values),
                        _comparison_text(comparison)]) + '\n'


def build_params(model: ModelKind, alpha: Optional[float] = None,
                 theta: Optional[float] = None, p: Optional[float] = None,
                 mu: Optional[float] = None, phi: Optional[float] = None):
    """
    The parameter bundle of ``model`` from individually supplied values.

    Raises
    ------
    UsageError
        If a parameter the model needs is missing.
    ParameterError
        If a value violates the parameter space.
    """
    required = {
        ModelKind.ULZI: ('alpha', 'theta'),
        ModelKind.ULOI: ('alpha', 'theta'),
        ModelKind.ULZOI: ('alpha', 'p', 'theta'),
        ModelKind.ZIB: ('alpha', 'mu', 'phi'),
        ModelKind.ZOIB: ('alpha', 'p', 'mu', 'phi'),
    }[model]
    given = dict(alpha=alpha, theta=theta, p=p, mu=mu, phi=phi)
    missing = [name for name in required if given[name] is None]
    if missing:
        raise UsageError(f'{model.value} needs --{", --".join(missing)}')

    if model is ModelKind.ULZOI:
        return ZeroOneInflatedParams(alpha=alpha, p=p, theta=theta)
    if model is ModelKind.ULZI:
        return InflatedParams(alpha, theta, InflationPoint.ZERO)
    if model is ModelKind.ULOI:
        return InflatedParams(alpha, theta, InflationPoint.ONE)
    return InflatedBetaParams(alpha=alpha, mu=mu, phi=phi,
                              p=p if model is ModelKind.ZOIB else None)


def cmd_sample(model: ModelKind, params, n: int, seed: int) -> str:
    """Draw ``n`` values from ``params`` with a seeded stream, as CSV."""
    if n < 0:
        raise UsageError(f'The number of draws must be non-negative (got {n})')
    rng = np.random.default_rng(seed)
    if isinstance(params, InflatedBetaParams):
        values = sample_beta_inflated(params, n, rng)
    else:
        values = sample_model(params, n, rng)
    logger.info('Drew %d values from %s with seed %d', n, model.value, seed)
    return write_values_csv(values)


def cmd_simulate(spec: SimulationSpec, fmt: str = 'text', bias: bool = True,
                 coverage: bool = True, workers: int = 1,
                 plot_data: bool = False) -> str:
    """
    Run a Monte Carlo study.

    With ``plot_data`` the output is the kernel density of each theta
    estimator per sample size (always CSV) instead of the tables.
    """
    check_format(fmt)
    if not (bias or coverage or plot_data):
        raise UsageError('Nothing to simulate: bias and coverage both disabled')
    table = run_study(spec, bias=bias, coverage=coverage, workers=workers)
    if plot_data:
        return frame_to_csv(estimator_density_frame(table))
    return emit_table(table, fmt)


def gof_frame(sample: ProportionSample, report: FitReport) -> pd.DataFrame:
    """Observed and fitted distribution functions at the unique sample values."""
    rows = distribution_comparison(sample, {'fitted': fitted_cdf(report)})
    return pd.DataFrame(rows, columns=['x', 'observed', 'fitted'])


def cmd_gof(dataset: Dataset, model: ModelKind, method: Method = Method.MLE,
            level: float = 0.95, fmt: str = 'csv') -> str:
    """(x, F_n(x), F_fit(x)) triples for plotting observed against fitted."""
    sample = dataset.values
    report = fit(sample, model, method, level)
    frame = gof_frame(sample, report)
    if check_format(fmt) == 'csv':
        return frame_to_csv(frame)
    ks = fitted_ks(sample, report)
    table = tabulate.tabulate(frame.values.tolist(),
                              headers=['x', 'F_n(x)', f'F({model.value})'],
                              floatfmt=TEXT_FLOAT_FORMAT)
    return f'{table}\n\nK-S statistic: {ks.statistic:.4f}\n'

