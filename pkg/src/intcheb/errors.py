"""Exception types raised across the package."""


class IntChebError(Exception):
    """Base class for all package errors."""


class DomainError(IntChebError, ValueError):
    """An input lies outside the domain where a formula is valid."""


class NonConvergence(IntChebError, ArithmeticError):
    pass


class EmptyDomain(IntChebError, ValueError):
    """No admissible grid point remains (the weight vanishes everywhere)."""


class PointInSupport(IntChebError, ValueError):
    """The evaluation point is too close to the Leja cluster for the estimator to be valid."""


class ModeUnavailable(IntChebError, ValueError):
    pass


class LengthMismatch(IntChebError, ValueError):
    pass


class BudgetTooSmall(IntChebError, ValueError):
    """No nonzero integer polynomial fits under the requested norm budget."""


class SingularNodes(IntChebError, ValueError):
    pass
