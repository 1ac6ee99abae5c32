"""Exception types shared across the library."""


class StatlenError(Exception):
    """Base class for all library errors."""


class ValidationError(StatlenError, ValueError):
    """A state failed its construction invariants."""


class NegativeWeight(ValidationError):
    """A probability weight is more negative than the validation tolerance."""


class NotNormalized(ValidationError):
    """Weights do not sum to one within the input tolerance."""


class NotHermitian(ValidationError):
    """A matrix deviates from its conjugate transpose beyond tolerance."""


class NotPositive(ValidationError):
    """A matrix has an eigenvalue below the negative validation tolerance."""


class NotUnitTrace(ValidationError):
    """A matrix trace deviates from one beyond the input tolerance."""


class BadRank(ValidationError):
    """Requested rank is outside 1..dim."""


class DimensionMismatch(StatlenError, ValueError):
    """Two states that must share a dimension do not."""


class DimensionCapExceeded(StatlenError):
    """A composite space would exceed the configured dimension cap."""

    def __init__(self, message, max_feasible=None):
        super().__init__(message)
        self.max_feasible = max_feasible


class SupportViolation(StatlenError, ValueError):
    """A tangent direction leaves the support of its base state."""


class RankDeficient(StatlenError, ValueError):
    """Operation requires a full-rank state; enable a ridge to proceed."""


class NotCommuting(StatlenError, ValueError):
    """Operation requires commuting states."""


class InfiniteYield(StatlenError):
    """A transport step has infinite relative entropy (support violation)."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class RankCollapse(StatlenError):
    """A quantum iterate lost rank while the ridge was disabled."""
