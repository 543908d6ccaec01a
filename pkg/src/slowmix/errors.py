"""Exception hierarchy shared across the package."""


class SlowmixError(Exception):
    """Base class for package errors."""


class InvalidInputError(SlowmixError):
    """Malformed arguments, configs, or domain violations."""


class CapacityError(SlowmixError):
    """Requested object exceeds a configured size/enumeration budget."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class PrecisionError(SlowmixError):
    """A computation could not be decided at the working precision."""


class ResolutionError(SlowmixError):
    """Sampling grid too coarse for the requested accuracy."""


class SmallDivisorError(SlowmixError):
    """Cohomological-equation frequency at or beyond the safe cutoff."""


class AssemblyError(SlowmixError):
    """Ceiling assembly failed (e.g. positivity violation)."""

    def __init__(self, message: str, level: int | None = None):
        super().__init__(message)
        self.level = level


class DomainError(SlowmixError):
    """Argument outside an operation's domain."""


class CorruptedCeilingError(SlowmixError):
    """Non-positive ceiling value encountered while flowing."""


class StiffnessError(SlowmixError):
    """ODE step size collapsed below the sanity floor."""
