"""
Exception hierarchy for unitlindley.

Every exception carries an ``exit_code`` which the command-line interface
uses as its exit status.
"""
from typing import Optional


class UnitLindleyError(Exception):
    """Base class for all unitlindley errors."""
    exit_code: int = 1
    category: str = 'error'


class UsageError(UnitLindleyError):
    """Incompatible options, bad flags or bad environment settings."""
    exit_code = 2
    category = 'usage'


class SpecError(UsageError):
    """A simulation spec violates its invariants."""


class ParameterError(UsageError, ValueError):
    """A parameter bundle violates its invariants."""


class DomainError(UsageError, ValueError):
    """A function argument lies outside the function's domain."""


class NoSignChangeError(DomainError):
    """The objective does not change sign over the bracket."""


class DataValidationError(UnitLindleyError):
    """Input data failed validation."""
    exit_code = 3
    category = 'data'


class OutOfRangeError(DataValidationError, ValueError):
    """A proportion lies outside [0, 1]."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class CsvParseError(DataValidationError):
    """A CSV cell could not be parsed as a number."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class MissingColumnError(DataValidationError):
    """The requested column is not present in the input."""


class EmptyDataError(DataValidationError):
    """No observations were found."""


class EstimationError(UnitLindleyError):
    """A model could not be fitted to the data."""
    exit_code = 4
    category = 'estimation'


class BoundaryError(EstimationError):
    """An inflation proportion estimate would lie on the boundary of (0, 1)."""


class NoInteriorDataError(EstimationError):
    """The sample holds no observations strictly inside (0, 1)."""


class ModelMismatchError(EstimationError):
    """The sample has mass where the model assigns probability zero."""

    def __init__(self, message: str, hint: Optional[str] = None):
        if hint:
            message = f'{message}; {hint}'
        super().__init__(message)
        self.hint = hint


class InvalidCdfError(EstimationError):
    """A model distribution function was observed to be invalid."""


class SimulationError(EstimationError):
    """Every replication of a simulation study failed."""


class ConvergenceError(UnitLindleyError):
    """An iterative method hit its iteration cap."""
    exit_code = 5
    category = 'convergence'

    def __init__(self, message: str, iterations: Optional[int] = None,
                 last_iterate=None):
        super().__init__(message)
        self.iterations = iterations
        self.last_iterate = last_iterate
