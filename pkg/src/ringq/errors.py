"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An input lies outside the domain where a quantity is defined."""


class UnsupportedExponentError(DomainError):
    """The exponent is outside the supported regime p > n."""


class RegimeError(DomainError):
    """The majorant exponent does not match the requested growth regime."""


class ConvergenceError(RuntimeError):
    """An iterative or adaptive scheme hit its cap before converging.

    ``last_iterate`` holds whatever the scheme had when it stopped, so callers
    can inspect or reuse a partially converged answer.
    """

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
