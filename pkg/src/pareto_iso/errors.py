"""Exception hierarchy.

Everything a caller can trigger with bad input derives from ``ValidationError``
so the CLI can map it to a single exit code.
"""


class ValidationError(ValueError):
    pass


class InvalidBodyError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class GridMismatchError(DomainError):
    """A measure atom does not sit on the shared angle grid."""


class EmptyMeasureError(ValidationError):
    pass


class NotASurfaceMeasureError(ValidationError):
    pass


class UnboundedBodyError(ValidationError):
    pass


class PreconditionError(ValidationError):
    """The candidate violates the problem constraints (not a criterion failure)."""


class NoSolutionError(ValidationError):
    pass
