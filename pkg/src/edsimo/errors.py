"""Exception types shared across the library."""


class ConvergenceError(RuntimeError):
    """Iterative solver did not meet its stopping rule within the iteration cap."""

    def __init__(self, message, t_lower=None, t_upper=None, iterations=None):
        super().__init__(message)
        self.t_lower = t_lower
        self.t_upper = t_upper
        self.iterations = iterations


class NumericalError(RuntimeError):
    """A linear solve or evaluation was rejected as numerically untrustworthy."""


class SearchExhaustedError(RuntimeError):
    """A parameter search ran out of grid without meeting its target."""
