"""Matrix apportionment: uniform similarity transforms and related constructions."""

from .errors import (
    ApportionError,
    DomainError,
    NumericError,
    PreconditionError,
    SizeError,
    StructuralError,
)
from .report import INCONCLUSIVE, INFEASIBLE, UNIFORM, ApportionReport

__all__ = [
    "ApportionError",
    "ApportionReport",
    "DomainError",
    "INCONCLUSIVE",
    "INFEASIBLE",
    "NumericError",
    "PreconditionError",
    "SizeError",
    "StructuralError",
    "UNIFORM",
]
