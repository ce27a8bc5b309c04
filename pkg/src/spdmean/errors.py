"""Exception types shared across the package."""


class SpdMeanError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(SpdMeanError):
    """Operands have incompatible shapes."""


class DomainError(SpdMeanError):
    """An input lies outside the mathematical domain of the operation."""


class NonConvergence(SpdMeanError):
    """The eigensolver failed to converge."""


class NotCommuting(SpdMeanError):
    """A closed-form oracle requires pairwise-commuting inputs."""
