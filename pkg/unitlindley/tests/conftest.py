import pathlib

import numpy as np
import pytest

from unitlindley.dataio import write_values_csv
from unitlindley.inflated import InflatedParams, ZeroOneInflatedParams, sample_model
from unitlindley.proportions import suff_stats

DATA_PATH = pathlib.Path(__file__).parent / 'data'

# Generator settings resembling fitted pass-proportion data: zero-inflated
# for one kind of school, zero-and-one-inflated for another.
ULZI_FIXTURE = InflatedParams(alpha=0.2438, theta=0.7617)
ULZOI_FIXTURE = ZeroOneInflatedParams(alpha=0.1, p=0.35, theta=1.3)


@pytest.fixture
def data_path() -> pathlib.Path:
    return DATA_PATH


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20201017)


@pytest.fixture
def ulzi_values() -> np.ndarray:
    return sample_model(ULZI_FIXTURE, 500, np.random.default_rng(1))


@pytest.fixture
def ulzoi_values() -> np.ndarray:
    return sample_model(ULZOI_FIXTURE, 500, np.random.default_rng(2))


@pytest.fixture
def ulzi_sample(ulzi_values):
    return suff_stats(ulzi_values)


@pytest.fixture
def ulzoi_sample(ulzoi_values):
    return suff_stats(ulzoi_values)


@pytest.fixture
def ulzi_csv(tmp_path, ulzi_values) -> str:
    path = tmp_path / 'ulzi.csv'
    path.write_text(write_values_csv(ulzi_values, header='pass_rate'))
    return str(path)


@pytest.fixture
def ulzoi_csv(tmp_path, ulzoi_values) -> str:
    path = tmp_path / 'ulzoi.csv'
    path.write_text(write_values_csv(ulzoi_values, header='pass_rate'))
    return str(path)
