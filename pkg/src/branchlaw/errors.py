"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ToleranceFailure(RuntimeError):
    """Quadrature could not meet the requested tolerance.

    Carries the best available estimate and an error bound so callers can
    decide whether to accept the degraded result.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(f"{message} (estimate={estimate!r}, error_bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class BracketFailure(RuntimeError):
    """Root bracketing failed (no sign change, or growth cap reached)."""


class OdeFailure(RuntimeError):
    """Adaptive ODE integration broke down (step underflow or rejected state)."""


class ResourceBudgetExceeded(RuntimeError):
    """Simulated population outgrew the memory budget; raise prune_eps."""


class BiasBudgetExceeded(RuntimeError):
    """Accumulated truncation-mass bound exceeded the batch bias budget."""


class OrderTooLarge(ValueError):
    """Moment order not representable even in the log domain."""


class RadiusExceeded(ValueError):
    """Series argument at or beyond the radius of convergence."""


class VarianceUnbounded(ValueError):
    """Requested empirical statistic has no finite variance at this argument."""


class NotEnoughData(ValueError):
    """Too few samples for the requested estimate or test."""
