"""Exception and warning types raised across conelab."""


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class DefiniteSignatureError(ValueError):
    """A null vector was requested in a definite space."""


class StabiliserError(ValueError):
    """An endomorphism is not in the stabiliser of the null line it was checked against.

    The offending residual is kept on ``residual``.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class InvarianceError(ValueError):
    """A subspace that must be invariant is not."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class NumericalInstabilityError(RuntimeError):
    """An iterative linear-algebra procedure failed to settle."""


class ConstructionError(ValueError):
    """Inconsistent parameters for a constructor."""


class RepresentationError(ValueError):
    """Action matrices do not form a representation of the given bracket."""


class SingularMetricError(ValueError):
    """The metric is not invertible at the requested point."""


class ConfigurationError(ValueError):
    """Bad configuration: jet order too small, unknown chart, malformed document."""


class DomainError(ValueError):
    """A point lies outside a chart domain."""


class IntegrationError(RuntimeError):
    """Parallel transport could not be integrated."""


class FrameError(ValueError):
    """A vector frame fails its algebraic normalisation."""


class ToleranceWarning(UserWarning):
    """A linear solve was ill conditioned; results are reported but suspect."""
