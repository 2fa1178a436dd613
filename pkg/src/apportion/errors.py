"""Exception hierarchy shared by every module."""


class ApportionError(Exception):
    """Base class for library errors."""


class PreconditionError(ApportionError, ValueError):
    """An input violates a documented precondition (tolerance-checked)."""


class DomainError(ApportionError, ValueError):
    """An input lies outside the domain where the operation is defined."""


class SizeError(DomainError):
    """An exhaustive or dense construction would exceed its size cap."""


class StructuralError(DomainError):
    """Input data is not a valid instance of the expected structure."""


class NumericError(ApportionError, ArithmeticError):
    """An iterative numerical method failed to converge."""
