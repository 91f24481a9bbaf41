"""Exception types shared across the package."""


class TightSpanError(Exception):
    """Base class for every error raised by tightspan."""


class InvalidMetric(TightSpanError, ValueError):
    """Raised when a distance matrix fails the metric axioms.

    ``violations`` holds every offending pair or triple, as
    ``Violation`` records, so callers can report all problems at once.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        shown = ", ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            shown += f", ... ({more} more)"
        super().__init__(f"invalid metric: {shown}")


class LengthMismatch(TightSpanError, ValueError):
    pass


class NotInDelta(TightSpanError, ValueError):
    pass


class NotExtremal(TightSpanError, ValueError):
    pass


class NotIntegerMetric(TightSpanError, ValueError):
    pass


class NotLipschitz(TightSpanError, ValueError):
    pass


class EmptyDomain(TightSpanError, ValueError):
    pass


class EmptySubset(TightSpanError, ValueError):
    pass


class NotSubspace(TightSpanError, ValueError):
    pass


class NotAdmissible(TightSpanError, ValueError):
    pass


class ZeroDimensional(TightSpanError, ValueError):
    pass


class BudgetExceeded(TightSpanError, RuntimeError):
    pass


class Disconnected(TightSpanError, ValueError):
    pass


class StabilityHypothesisFails(TightSpanError, RuntimeError):
    """Raised with the triple where no interval point was close enough."""


class NotAGroup(TightSpanError, ValueError):
    pass


class NotCellular(TightSpanError, AssertionError):
    pass
