"""Exception types shared across the package."""


class MonoborelError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(MonoborelError):
    """Component counts of two series are incompatible."""


class SupportDomainError(MonoborelError):
    """A series has support outside the domain an operation requires."""


class PlaneMismatchError(MonoborelError):
    """A transformed series is tagged with the wrong plane for an operation."""


class WeightMismatchError(MonoborelError):
    """Two transformed series carry different monomial weights."""


class InsufficientDataError(MonoborelError):
    """Not enough coefficients to run an estimation procedure."""


class LatticeSizeError(MonoborelError):
    """The fractional-exponent lattice of a ray restriction exceeds the cap."""


class PadeDegeneracyError(MonoborelError):
    """The Pade linear system is unsolvable at the requested degrees."""


class NotSummableError(MonoborelError):
    """Growth along the integration ray is too fast for Laplace integration."""


class SingularDirectionError(MonoborelError):
    """The requested direction is obstructed by a Borel-plane singularity."""

    def __init__(self, message, offenders=None):
        super().__init__(message)
        self.offenders = list(offenders) if offenders else []


class QuadratureAccuracyError(MonoborelError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class SingularProblemError(MonoborelError):
    """A problem violates the invertibility precondition at the origin."""


class ResolventConditionError(MonoborelError):
    """The resolvent matrix is numerically singular at a grid node."""


class NumericError(MonoborelError):
    """An underlying numerical routine failed."""


class ConfigError(MonoborelError):
    """An experiment configuration is malformed or incomplete."""


class NonContractionWarning(UserWarning):
    """Picard iteration hit the iteration cap before reaching tolerance."""
