"""Exception types shared across the package."""


class AliasingError(ValueError):
    """Requested coefficient order is too high for the sample count."""


class WindowTooSmallError(ValueError):
    """A window holds too few samples to determine the requested degree."""


class SolverConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget.

    Raised instead of returning a possibly wrong answer.
    """


class ConfigError(ValueError):
    """A run configuration failed to parse or validate."""
