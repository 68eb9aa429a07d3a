from importlib import metadata

try:
    __version__ = metadata.version('unitlindley')
except metadata.PackageNotFoundError:
    __version__ = 'unknown'

from .estimation import FitReport, Method, ModelKind, fit_unit_lindley
from .exceptions import UnitLindleyError
from .fitting import fit, fitted_cdf
from .gof import KsResult, ks_statistic
from .inflated import InflatedParams, InflationPoint, ZeroOneInflatedParams
from .inflated_beta import InflatedBetaParams
from .proportions import ProportionSample, suff_stats
from .unit_lindley import UnitLindleyParams

__all__ = [
    'FitReport', 'InflatedBetaParams', 'InflatedParams', 'InflationPoint',
    'KsResult', 'Method', 'ModelKind', 'ProportionSample', 'UnitLindleyError',
    'UnitLindleyParams', 'ZeroOneInflatedParams', 'fit', 'fit_unit_lindley',
    'fitted_cdf', 'ks_statistic', 'suff_stats',
]
