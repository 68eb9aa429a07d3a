"""
Reading proportion data from delimiter-separated files and writing values
back out.
"""
import dataclasses
import enum
import logging
import math
import sys
from typing import List, Sequence, Union

import inflection
import numpy as np
import pandas as pd

from .exceptions import (CsvParseError, EmptyDataError, MissingColumnError,
                         OutOfRangeError, UsageError)
from .proportions import ProportionSample, suff_stats

logger = logging.getLogger(__name__)

STDIN = '-'
CSV_FLOAT_FORMAT = '%.17g'

ColumnSpec = Union[str, int]


class Scale(enum.Enum):
    """How input values map onto [0, 1]."""
    UNIT = 'unit'
    PERCENT = 'percent'

    @classmethod
    def parse(cls, value: str) -> 'Scale':
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UsageError(
                f'Unknown scale {value!r}; choose unit or percent'
            ) from None

    @property
    def divisor(self) -> float:
        return 100.0 if self is Scale.PERCENT else 1.0


@dataclasses.dataclass(frozen=True, eq=False)
class Dataset:
    """
    A validated column of proportions.

    Attributes
    ----------
    source : str
        File path, or ``'-'`` for standard input.

    column : str
        Header of the column that was read.

    scale : Scale

    values : ProportionSample
        The validated values, all in [0, 1].
    """
    source: str
    column: str
    scale: Scale
    values: ProportionSample


def normalize_header(name: str) -> str:
    """
    Normalize a header for lenient matching.

    Example
    -------
    >>> normalize_header('Pass Percentage (%)')
    'pass_percentage'
    """
    return inflection.underscore(inflection.parameterize(str(name), separator='_'))


def resolve_column(headers: Sequence[str], column: ColumnSpec) -> int:
    """
    Position of ``column`` among ``headers``.

    ``column`` is a 0-based index (an int, or a string of digits which is not
    itself a header), an exact header, or a header equal after
    `normalize_header`.
    """
    headers = [str(header) for header in headers]
    if isinstance(column, str):
        if column in headers:
            return headers.index(column)
        if not column.strip().isdigit():
            wanted = normalize_header(column)
            matches = [idx for idx, header in enumerate(headers)
                       if normalize_header(header) == wanted]
            if len(matches) == 1:
                return matches[0]
            raise MissingColumnError(
                f'No column {column!r} among {", ".join(headers)}'
            )
        column = int(column)

    if not 0 <= column < len(headers):
        raise MissingColumnError(
            f'Column index {column} is out of range for {len(headers)} '
            f'column(s)'
        )
    return column


def parse_value(text: str, scale: Scale, row: int) -> float:
    """
    Parse one cell as a proportion on ``scale``.

    Endpoints are exact: ``"0"``, ``"1"``, ``"0.0"``, ``"1.0"`` (and
    ``"100"`` on the percent scale) give 0.0 and 1.0; nothing is snapped.
    """
    stripped = text.strip()
    try:
        value = float(stripped)
    except ValueError:
        raise CsvParseError(f'row {row}: {text!r} is not a number', row=row) from None
    if not math.isfinite(value):
        raise CsvParseError(f'row {row}: {text!r} is not a finite number', row=row)

    value = value / scale.divisor
    if not 0.0 <= value <= 1.0:
        raise OutOfRangeError(
            f'row {row}: {stripped} is outside [0, {scale.divisor:g}]',
            index=row,
        )
    return value


def _read_frame(path: str, delimiter: str) -> pd.DataFrame:
    source = sys.stdin if path == STDIN else path
    try:
        return pd.read_csv(source, sep=delimiter, dtype=str,
                           keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise EmptyDataError(f'{path}: no header row') from None
    except pd.errors.ParserError as ex:
        raise CsvParseError(f'{path}: {ex}') from None
    except FileNotFoundError:
        raise UsageError(f'No such file: {path}') from None


def load_csv(path: str, column: ColumnSpec = 0, scale: Scale = Scale.UNIT,
             delimiter: str = ',') -> Dataset:
    """
    Load one column of proportions from a delimited file with a header row.

    Parameters
    ----------
    path : str
        File path, or ``'-'`` for standard input.

    column : str or int, optional
        Column name (matched exactly, then after `normalize_header`) or
        0-based index.

    scale : Scale, optional
        ``Scale.PERCENT`` divides every value by 100 before validation.

    delimiter : str, optional

    Raises
    ------
    CsvParseError
        For unparseable files and non-numeric cells; carries the 1-based data
        row number.

    OutOfRangeError
        For values outside [0, 1] after scaling.

    MissingColumnError

    EmptyDataError
        If there are no data rows.
    """
    frame = _read_frame(path, delimiter)
    idx = resolve_column(list(frame.columns), column)
    name = str(frame.columns[idx])
    cells = frame.iloc[:, idx].tolist()
    if not cells:
        raise EmptyDataError(f'{path}: column {name!r} has no data rows')

    values = [parse_value(str(cell), scale, row)
              for row, cell in enumerate(cells, start=1)]
    sample = suff_stats(values)
    logger.info('Loaded %d values from %s[%s] (%d zeros, %d ones)',
                sample.n, path, name, sample.n0, sample.n1)
    return Dataset(source=path, column=name, scale=scale, values=sample)


def frame_to_csv(frame: pd.DataFrame) -> str:
    """CSV text with every float written to 17 significant digits."""
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT)


def write_values_csv(values: Union[np.ndarray, List[float]],
                     header: str = 'value') -> str:
    """One value per row under a single header; empty input gives the header only."""
    frame = pd.DataFrame({header: np.asarray(values, dtype=float)})
    return frame_to_csv(frame)
