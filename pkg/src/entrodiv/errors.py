"""Exception hierarchy shared by every module.

The CLI maps each class to its own exit status, so callers can tell a bad
input apart from a numerical failure without parsing messages.
"""


class DiversificationError(Exception):
    """Base class for all errors raised by entrodiv."""


class ValidationError(DiversificationError, ValueError):
    """An input violates a documented precondition."""


class DomainError(ValidationError):
    """A function was evaluated outside its mathematical domain."""


class DegenerateInputError(ValidationError):
    """Input is well-formed but carries no usable information (e.g. zero variance)."""


class InfeasibleMomentsError(ValidationError):
    """Moment targets that no probability distribution can attain."""


class InputFormatError(DiversificationError):
    """A file could not be parsed into the expected numeric layout."""


class NumericalError(DiversificationError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""
