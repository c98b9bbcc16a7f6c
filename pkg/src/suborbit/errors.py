"""Exception types shared across the package."""


class SuborbitError(Exception):
    """Base class for all library errors."""


class IncompatibleOperandsError(SuborbitError):
    """Mixed vector kinds, or sampled functions on different grids."""


class GridMismatchError(SuborbitError):
    """A translation or sample index does not land on the grid."""


class DegenerateFamilyError(SuborbitError):
    """Every Gram eigenvalue sits below the rank tolerance."""


class ScheduleViolationError(SuborbitError):
    """A power schedule violates the gap conditions it was required to meet."""


class PreconditionError(SuborbitError):
    """A documented precondition failed; ``field`` names the offending input."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class MaterializationError(SuborbitError):
    """A scaled vector cannot be realised in double precision."""
