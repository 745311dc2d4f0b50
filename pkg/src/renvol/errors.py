"""Exception hierarchy shared by the exact and numeric pipelines."""


class RenvolError(Exception):
    """Base class for all errors raised by renvol."""


class NoKEMetricError(RenvolError, ValueError):
    """Raised when beta >= 1, where no complete Kahler-Einstein metric exists."""


class TruncationError(RenvolError, ArithmeticError):
    """A series operation needed a coefficient beyond the known window."""


class ConvergenceError(RenvolError, ArithmeticError):
    """A numeric routine failed to reach its tolerance."""


class IllConditionedError(ConvergenceError):
    """A least-squares system is too ill-conditioned for the working precision."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition
