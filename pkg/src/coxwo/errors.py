"""Exception hierarchy shared by all modules."""


class CoxwoError(Exception):
    """Base class for all library errors."""


class InputError(CoxwoError):
    """Malformed literal, invalid system spec, or bad CLI argument (exit code 2)."""


class MixedFieldError(InputError):
    """Arithmetic attempted between two distinct irrational quadratic fields."""


class BudgetExceededError(CoxwoError):
    """An enumeration budget was exhausted before the result stabilized (exit code 3)."""


class InternalCheckError(CoxwoError):
    """An internal consistency assertion failed (exit code 4)."""
