"""Exception types shared across the toolbox."""


class InvarcertError(Exception):
    """Base class for all toolbox errors."""


class DimensionMismatch(InvarcertError, ValueError):
    """Operands whose dimensions do not line up."""


class NumericalBreakdown(InvarcertError, ArithmeticError):
    """A numerical routine could not make further reliable progress."""


class MaxIterationsExceeded(NumericalBreakdown):
    """Iteration cap reached before termination."""


class InvalidArguments(InvarcertError, ValueError):
    """Arguments outside the documented domain of an operation."""
