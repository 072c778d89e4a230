"""Exception types shared across the package."""


class DychanError(Exception):
    """Base class for all package-specific errors."""


class InvalidGainsError(DychanError, ValueError):
    """Channel gains are negative or not in non-increasing order."""


class RateParseError(DychanError, ValueError):
    """A rate value could not be parsed as a non-negative rational."""


class NotInRegionError(DychanError, ValueError):
    """A rate tuple lies outside the capacity region polytope."""

    def __init__(self, message: str, violated: tuple[str, ...] = ()):
        super().__init__(message)
        self.violated = violated


class PreconditionError(DychanError, ValueError):
    """An operation was called with inputs that violate its contract."""


class InternalInfeasibleError(DychanError, RuntimeError):
    """A level-assignment stage ran out of relay levels.

    Impossible for in-region inputs; raised to surface planner bugs
    instead of emitting a broken plan.
    """


class PlanValidationError(DychanError, ValueError):
    """A level plan violates one of its structural invariants."""


class UnresolvableChainError(DychanError, RuntimeError):
    """A cyclic decoding chain could not be resolved from known streams."""


class ScanLimitError(DychanError, ValueError):
    """A scan was requested beyond the configured safety limit."""
