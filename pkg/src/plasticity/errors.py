"""Exception types raised by the library."""


class UsageError(ValueError):
    """Invalid arguments: wrong dimensions, wrong label count, bad selector."""


class NumericalError(ArithmeticError):
    """A numerical invariant failed (non-convergence, residual imaginary part, ...)."""
