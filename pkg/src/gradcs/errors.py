"""Exception hierarchy shared by every gradcs module."""


class GradCSError(Exception):
    """Base class for all package errors."""


class DimensionError(GradCSError, ValueError):
    """Operand shapes do not agree."""


class NumericalError(GradCSError, ArithmeticError):
    """A factorization or normalization failed numerically."""


class ConfigError(GradCSError, ValueError):
    """Invalid parameter combination."""


class FormatError(GradCSError, ValueError):
    """Malformed file contents."""


class DivergenceError(GradCSError, ArithmeticError):
    """Non-finite values appeared in an iterate.

    The trace recorded up to the failure is kept on ``self.trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
