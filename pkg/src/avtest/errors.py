"""Exception types raised by the library."""


class AVTestError(Exception):
    """Base class for all library errors."""


class InvalidSampleError(AVTestError, ValueError):
    """Observations are empty, non-finite or negative."""


class InvalidOrderError(AVTestError, ValueError):
    """Statistic order ``k`` is below 2."""


class UnsupportedOrderError(AVTestError, ValueError):
    """The requested (family, k) combination has no implementation."""


class BudgetExceededError(AVTestError, ValueError):
    """Exact tuple enumeration would exceed the configured budget."""


class InsufficientSampleError(AVTestError, ValueError):
    """Too few observations for a U-statistic of the requested degree."""


class ParameterRangeError(AVTestError, ValueError):
    """Alternative parameters fall outside the family's valid range."""


class UnsupportedMethodError(AVTestError, ValueError):
    """A p-value method that does not apply to the statistic family."""


class NumericFailureError(AVTestError, RuntimeError):
    """Quadrature or root finding failed to reach the requested accuracy."""
