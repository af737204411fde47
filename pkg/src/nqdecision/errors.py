"""Exception hierarchy shared by all modules."""


class NQError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NQError, ValueError):
    """Input violates a documented precondition (shape, range, symmetry)."""


class DegenerateInputError(ValidationError):
    """Input is structurally valid but degenerate, e.g. a zero vector."""


class NumericError(NQError, ArithmeticError):
    """A numerical routine failed or produced non-finite output."""


class DatasetNotFoundError(NQError, LookupError):
    """Requested dataset is neither a catalog name nor an existing file."""


class DatasetParseError(NQError, ValueError):
    """Dataset file could not be parsed."""
