"""Exception hierarchy shared by all leafspace modules."""


class LeafspaceError(Exception):
    """Base class for all library errors."""


class ParseError(LeafspaceError):
    """Malformed textual or JSON input."""


class PreconditionError(LeafspaceError):
    """An operation was called with arguments violating its contract."""


class FieldMismatchError(PreconditionError):
    """Arithmetic attempted between numbers living in different quadratic fields."""


class DivisionByZeroError(PreconditionError):
    """Exact division by zero."""


class PeriodMismatchError(PreconditionError):
    """PL maps whose periods admit no common refinement were combined."""
