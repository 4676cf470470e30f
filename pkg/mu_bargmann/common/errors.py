"""
Exception hierarchy shared by every numerical routine of the package.

Classes:
    MuBargmannError: Base class, never raised directly.
    DomainError: Arguments outside the domain where a quantity is defined.
    ToleranceNotMet: Adaptive refinement stalled before the requested accuracy was reached.
    NonConvergent: An integral over an unbounded domain diverges.
    NumericalOverflow: A finite quantity does not fit in double precision.
"""


class MuBargmannError(Exception):
    pass


class DomainError(MuBargmannError, ValueError):
    pass


class ToleranceNotMet(MuBargmannError, ArithmeticError):
    """Raised when a quadrature or series cannot certify its error budget.

    Args:
        message (str): Human readable description.
        estimate (float | complex | None): Best value reached before giving up.
        error (float | None): Error estimate attached to that value.
    """

    def __init__(self, message: str, estimate=None, error: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NonConvergent(MuBargmannError, ArithmeticError):
    """Raised when the radial integrand keeps growing towards the truncation radius.

    Args:
        message (str): Human readable description.
        growth (tuple[float, ...]): Integrand magnitudes observed on the outermost shells.
    """

    def __init__(self, message: str, growth: tuple[float, ...] = ()):
        super().__init__(message)
        self.growth = tuple(growth)


class NumericalOverflow(MuBargmannError, OverflowError):
    pass
