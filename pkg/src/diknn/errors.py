class UsageError(ValueError):
    """Bad arguments: mismatched shapes, out-of-range parameters, bad files."""


class InsufficientDataError(ValueError):
    """Too few samples for the requested k / Markov order."""


class NumericalError(ArithmeticError):
    """Estimator produced a non-finite value or a dynamical system diverged."""
