"""Exception types shared across the package."""


class FermatCoverError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(FermatCoverError):
    """Operands live at incompatible moduli, levels or lengths."""


class ConfigError(FermatCoverError):
    """A cover/limit configuration violates its invariants."""


class DomainError(FermatCoverError):
    """Input outside the domain of an operation (off-curve point, bad disk...)."""


class BranchedFiberError(DomainError):
    """Fiber requested over a branch or limit point; use fixed_points instead."""


class ContinuationError(FermatCoverError):
    """Adaptive continuation failed (path too close to a branch point)."""


class PathPlanningError(FermatCoverError):
    """Could not build a corridor avoiding the special points."""


class NotInSameFiberError(FermatCoverError):
    """No deck element maps the first point to the second."""


class PrecisionError(FermatCoverError):
    """A numeric identification was too ambiguous to trust."""


class DivergenceError(FermatCoverError):
    """No admissible convergence exponent for the given zero sequence."""


class StabilizationError(FermatCoverError):
    """End count did not stabilize (or exhaustion too shallow)."""
