import argparse
import logging
import os
import sys
from typing import Optional, Sequence, Tuple

from . import commands
from .dataio import STDIN, Dataset, Scale, load_csv
from .estimation import Method, ModelKind, z_value
from .exceptions import UnitLindleyError, UsageError
from .simulation import (DEFAULT_LEVELS, DEFAULT_SAMPLE_SIZES, MASK64,
                         SimulationSpec, study_grid)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20201017
DESCRIPTION = """\
Zero-, one- and zero-and-one-inflated unit Lindley distributions: fit
proportions from a CSV column, compare against inflated beta fits, draw
samples and run Monte Carlo studies of the estimators.
"""


def get_seed() -> int:
    """Get the default random seed from the environment."""
    value = os.environ.get('UNITLINDLEY_SEED', str(DEFAULT_SEED))
    try:
        seed = int(value)
    except ValueError:
        raise UsageError(f'UNITLINDLEY_SEED is not an integer: {value!r}') from None
    if seed < 0:
        raise UsageError(f'UNITLINDLEY_SEED must be non-negative: {seed}')
    return seed


def get_level() -> float:
    """Get the default confidence level from the environment."""
    value = os.environ.get('UNITLINDLEY_LEVEL', '0.95')
    try:
        level = float(value)
    except ValueError:
        raise UsageError(f'UNITLINDLEY_LEVEL is not a number: {value!r}') from None
    z_value(level)
    return level


def get_format() -> str:
    """Get the default output format from the environment."""
    return commands.check_format(os.environ.get('UNITLINDLEY_FORMAT', 'text'))


def get_workers() -> int:
    """Get the number of simulation worker processes from the environment."""
    value = os.environ.get('UNITLINDLEY_WORKERS', '1')
    try:
        workers = int(value)
    except ValueError:
        raise UsageError(f'UNITLINDLEY_WORKERS is not an integer: {value!r}') from None
    if workers < 1:
        raise UsageError(f'UNITLINDLEY_WORKERS must be at least 1: {workers}')
    return workers


def get_delimiter() -> str:
    """Get the input CSV delimiter from the environment."""
    delimiter = os.environ.get('UNITLINDLEY_DELIMITER', ',')
    if not delimiter:
        raise UsageError('UNITLINDLEY_DELIMITER unset')
    return delimiter


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(item) for item in text.split(',') if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a list of integers: {text!r}')


def _float_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(',') if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a list of numbers: {text!r}')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help='Random seed (default: $UNITLINDLEY_SEED)')
    common.add_argument('--format', choices=commands.FORMATS, default=None,
                        help='Output format (default: $UNITLINDLEY_FORMAT)')
    common.add_argument('--level', type=float, default=None,
                        help='Confidence level (default: $UNITLINDLEY_LEVEL)')
    common.add_argument('--log-level', default='WARNING', type=str.upper,
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'),
                        help='Python logging level')

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument('path', nargs='?', default=STDIN,
                      help='CSV file with a header row, or - for stdin')
    data.add_argument('--column', default='0',
                      help='Column name or 0-based index')
    data.add_argument('--scale', default=Scale.UNIT.value,
                      choices=[scale.value for scale in Scale])
    data.add_argument('--delimiter', default=None,
                      help='Input delimiter (default: $UNITLINDLEY_DELIMITER)')

    model_params = argparse.ArgumentParser(add_help=False)
    for name in ('alpha', 'theta', 'p', 'mu', 'phi'):
        model_params.add_argument(f'--{name}', type=float, default=None)

    parser = argparse.ArgumentParser(prog='unitlindley', description=DESCRIPTION)
    subparsers = parser.add_subparsers(dest='command', required=True)

    fit = subparsers.add_parser('fit', parents=[common, data],
                                help='Fit one model to a CSV column')
    fit.add_argument('--model', required=True,
                     help='ulzi, uloi, ulzoi, zib or zoib')
    fit.add_argument('--method', default=Method.MLE.value,
                     help='mle, bcmle or cme (theta estimator)')

    subparsers.add_parser(
        'compare', parents=[common, data],
        help='Compare unit Lindley and inflated beta fits by K-S distance',
    )

    gof = subparsers.add_parser(
        'gof', parents=[common, data],
        help='Observed and fitted distribution functions for plotting',
    )
    gof.add_argument('--model', required=True)
    gof.add_argument('--method', default=Method.MLE.value)

    sample = subparsers.add_parser('sample', parents=[common, model_params],
                                   help='Draw a sample as CSV')
    sample.add_argument('--model', required=True)
    sample.add_argument('-n', '--size', type=int, required=True)
    sample.add_argument('-o', '--output', default=None,
                        help='Output file (default: stdout)')

    simulate = subparsers.add_parser(
        'simulate', parents=[common, model_params],
        help='Monte Carlo bias and coverage study',
    )
    simulate.add_argument('--model', default=ModelKind.ULZI.value,
                          help='ulzi or ulzoi')
    simulate.add_argument('--grid', action='store_true',
                          help='Run every parameter set of the standard grid')
    simulate.add_argument('--sizes', type=_int_list, default=DEFAULT_SAMPLE_SIZES)
    simulate.add_argument('--reps', type=int, default=1000)
    simulate.add_argument('--levels', type=_float_list, default=DEFAULT_LEVELS)
    simulate.add_argument('--no-bias', action='store_true')
    simulate.add_argument('--no-coverage', action='store_true')
    simulate.add_argument('--plot-data', action='store_true',
                          help='Emit theta estimator densities as CSV')
    simulate.add_argument('--workers', type=int, default=None,
                          help='Worker processes (default: $UNITLINDLEY_WORKERS)')
    return parser


def _dataset(args) -> Dataset:
    delimiter = args.delimiter if args.delimiter is not None else get_delimiter()
    return load_csv(args.path, column=args.column,
                    scale=Scale.parse(args.scale), delimiter=delimiter)


def _simulate(args, seed: int, fmt: str) -> str:
    model = ModelKind.parse(args.model)
    if args.grid:
        grid = study_grid(model)
    else:
        grid = [commands.build_params(model, alpha=args.alpha,
                                      theta=args.theta, p=args.p)]
    workers = args.workers if args.workers is not None else get_workers()

    outputs = []
    for params in grid:
        spec = SimulationSpec(
            model=model,
            true_params=params,
            sample_sizes=args.sizes,
            replications=args.reps,
            base_seed=seed,
            ci_levels=args.levels,
        )
        outputs.append(commands.cmd_simulate(
            spec, fmt=fmt, bias=not args.no_bias,
            coverage=not args.no_coverage, workers=workers,
            plot_data=args.plot_data,
        ))
    if fmt == 'csv' or args.plot_data:
        # One header for the concatenated tables.
        return outputs[0] + ''.join(
            output.split('\n', 1)[1] for output in outputs[1:]
        )
    return '\n'.join(outputs)


def run(args) -> str:
    """Execute the parsed command and return its output."""
    seed = args.seed if args.seed is not None else get_seed()
    if not 0 <= seed <= MASK64:
        raise UsageError(f'--seed must be in [0, 2**64 - 1] (got {seed})')
    fmt = args.format if args.format is not None else get_format()
    level = args.level if args.level is not None else get_level()
    z_value(level)

    if args.command == 'fit':
        return commands.cmd_fit(_dataset(args), ModelKind.parse(args.model),
                                Method.parse(args.method), level, fmt)
    if args.command == 'compare':
        return commands.cmd_compare(_dataset(args), level, fmt)
    if args.command == 'gof':
        return commands.cmd_gof(_dataset(args), ModelKind.parse(args.model),
                                Method.parse(args.method), level, fmt)
    if args.command == 'sample':
        model = ModelKind.parse(args.model)
        params = commands.build_params(model, alpha=args.alpha,
                                       theta=args.theta, p=args.p,
                                       mu=args.mu, phi=args.phi)
        output = commands.cmd_sample(model, params, args.size, seed)
        if args.output:
            with open(args.output, 'wt') as f:
                f.write(output)
            return ''
        return output
    if args.command == 'simulate':
        return _simulate(args, seed, fmt)
    raise UsageError(f'Unknown command {args.command!r}')


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run unitlindley based on command-line arguments."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )

    try:
        output = run(args)
    except UnitLindleyError as ex:
        print(f'error ({ex.category}): {ex}', file=sys.stderr)
        return ex.exit_code

    sys.stdout.write(output)
    return 0


if __name__ == '__main__':
    sys.exit(main())
