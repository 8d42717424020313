"""Exception hierarchy shared by all modules."""


class StrataError(Exception):
    """Base class for every error raised by strata_lab."""


class ParseError(StrataError, ValueError):
    pass


class NonHomogeneousError(ParseError):
    pass


class FieldMismatchError(StrataError, ValueError):
    pass


class ShapeError(StrataError, ValueError):
    """A morphism does not have the shape an operation requires."""


class DegreeError(ShapeError):
    """A matrix entry has the wrong degree for its cell."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("degree-violating cells: " + "; ".join(str(v) for v in self.violations))


class NotInjectiveError(StrataError, ValueError):
    pass


class PreconditionError(StrataError, ValueError):
    pass


class BudgetExceededError(StrataError, RuntimeError):
    def __init__(self, message, histogram=None):
        super().__init__(message)
        self.histogram = dict(histogram or {})


class ConsistencyError(StrataError, AssertionError):
    """An internal cross-check failed; signals a defect, not bad input."""
