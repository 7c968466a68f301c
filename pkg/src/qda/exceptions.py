"""Exception types shared across the package."""


class CapacityError(ValueError):
    """A generator was asked for more points or dimensions than it supports."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NoMassError(RuntimeError):
    """Every support point received zero mass; the proposal misses the target."""


class TargetEvaluationError(RuntimeError):
    """A target density callback returned NaN or another unusable value."""


class StageError(RuntimeError):
    """An adaptive stage could not proceed; carries the reports so far."""

    def __init__(self, message, reports=()):
        super().__init__(message)
        self.reports = list(reports)
