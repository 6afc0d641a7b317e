"""Exception hierarchy shared by every module."""


class MonoExtractError(Exception):
    """Base class for all library errors."""


class PreconditionError(MonoExtractError, ValueError):
    """An operation was called outside its documented domain."""


class LimitExceeded(MonoExtractError):
    """Instance is larger than the configured exact-computation limit."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds exact limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class BudgetExceeded(MonoExtractError):
    """An enumeration ran past its configured node budget."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: enumeration budget of {budget} nodes exceeded")
        self.what = what
        self.budget = budget


class RetriesExhausted(MonoExtractError):
    """A randomized procedure used up its retries without an accepted trial."""

    def __init__(self, what: str, trials: list):
        super().__init__(f"{what}: no accepted trial after {len(trials)} attempts")
        self.what = what
        self.trials = trials


class FormatError(MonoExtractError, ValueError):
    """Malformed graph / colouring / signing text."""


class VerificationError(MonoExtractError, AssertionError):
    """An output failed its independent verifier. Always a bug."""
