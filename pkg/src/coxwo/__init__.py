"""Exact weak-order computations for Coxeter groups in geometric representations."""

from .errors import (
    BudgetExceededError,
    CoxwoError,
    InputError,
    InternalCheckError,
    MixedFieldError,
)
from .scalar import Scalar, format_scalar, parse_scalar

__all__ = [
    "BudgetExceededError",
    "CoxwoError",
    "InputError",
    "InternalCheckError",
    "MixedFieldError",
    "Scalar",
    "format_scalar",
    "parse_scalar",
]
