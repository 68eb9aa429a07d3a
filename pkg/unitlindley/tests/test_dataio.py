import numpy as np
import pytest

from unitlindley.dataio import (Scale, load_csv, normalize_header,
                                resolve_column, write_values_csv)
from unitlindley.exceptions import (CsvParseError, EmptyDataError,
                                    MissingColumnError, OutOfRangeError,
                                    UsageError)


def test_load_proportions(data_path):
    dataset = load_csv(str(data_path / 'proportions.csv'), column='pass_rate')
    sample = dataset.values
    assert dataset.column == 'pass_rate'
    assert (sample.n, sample.n0, sample.n1) == (10, 2, 1)
    assert sample.values[1] == 0.42


def test_load_by_index(data_path):
    by_name = load_csv(str(data_path / 'proportions.csv'), column='pass_rate')
    by_index = load_csv(str(data_path / 'proportions.csv'), column='1')
    np.testing.assert_array_equal(by_name.values.values, by_index.values.values)
    assert load_csv(str(data_path / 'proportions.csv'), column=1).column == 'pass_rate'


def test_load_percent(data_path):
    dataset = load_csv(str(data_path / 'percent.csv'), column='pass percentage',
                       scale=Scale.PERCENT, delimiter=';')
    assert dataset.column == 'Pass Percentage (%)'
    values = dataset.values.values
    assert values[2] == 1.0
    assert values[1] == 0.375
    assert (dataset.values.n0, dataset.values.n1) == (1, 1)


def test_out_of_range_row(data_path):
    with pytest.raises(OutOfRangeError, match='row 3') as excinfo:
        load_csv(str(data_path / 'out_of_range.csv'))
    assert excinfo.value.index == 3


def test_percent_range_message(tmp_path):
    path = tmp_path / 'percent.csv'
    path.write_text('pct\n50\n150\n')
    with pytest.raises(OutOfRangeError, match=r'row 2: 150 is outside \[0, 100\]'):
        load_csv(str(path), scale=Scale.PERCENT)


def test_not_numeric_row(data_path):
    with pytest.raises(CsvParseError) as excinfo:
        load_csv(str(data_path / 'not_numeric.csv'))
    assert excinfo.value.row == 2


def test_header_only(data_path):
    with pytest.raises(EmptyDataError):
        load_csv(str(data_path / 'header_only.csv'))


def test_empty_file(tmp_path):
    path = tmp_path / 'empty.csv'
    path.write_text('')
    with pytest.raises(EmptyDataError):
        load_csv(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(UsageError):
        load_csv(str(tmp_path / 'nope.csv'))


@pytest.mark.parametrize('column', ['rate', '5', 7])
def test_missing_column(data_path, column):
    with pytest.raises(MissingColumnError):
        load_csv(str(data_path / 'proportions.csv'), column=column)


def test_resolve_column():
    headers = ['id', 'Pass Rate', '2019']
    assert resolve_column(headers, 'Pass Rate') == 1
    assert resolve_column(headers, 'pass_rate') == 1
    assert resolve_column(headers, '2019') == 2
    assert resolve_column(headers, '0') == 0


@pytest.mark.parametrize('name, expected', [
    ('Pass Percentage (%)', 'pass_percentage'),
    ('PassRate', 'passrate'),
    ('  pass rate ', 'pass_rate'),
])
def test_normalize_header(name, expected):
    assert normalize_header(name) == expected


def test_scale_parse():
    assert Scale.parse('PERCENT') is Scale.PERCENT
    assert Scale.parse('unit').divisor == 1.0
    with pytest.raises(UsageError):
        Scale.parse('permille')


def test_values_round_trip(tmp_path, ulzi_values):
    path = tmp_path / 'values.csv'
    path.write_text(write_values_csv(ulzi_values))
    dataset = load_csv(str(path), column='value')
    np.testing.assert_array_equal(dataset.values.values, ulzi_values)


def test_write_no_values():
    assert write_values_csv([]) == 'value\n'
