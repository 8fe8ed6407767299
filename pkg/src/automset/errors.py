"""Exception hierarchy shared by all modules."""


class AutomsetError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(AutomsetError):
    """Input violates a documented precondition (CLI exit code 2)."""


class DomainMismatch(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class NonInvariantSubdomain(ValidationError):
    pass


class NonStabilizedSubfamily(ValidationError):
    pass


class InvalidFamily(ValidationError):
    pass


class EmptyGraph(ValidationError):
    pass


class NotInterval(ValidationError):
    pass


class NotChordal(NotInterval):
    """Every interval graph is chordal, so this is also a :class:`NotInterval`."""


class MarkedSetNotClique(ValidationError):
    pass


class BudgetExceeded(AutomsetError):
    """The brute-force oracle refused an instance larger than its budget."""


class IndexBoundExceeded(AutomsetError):
    """Coset search outgrew the promised index (CLI exit code 4).

    Raised only when a caller's precondition is false, e.g. the membership
    predicate does not describe a subgroup.
    """


class InternalInvariantError(AutomsetError):
    """An invariant that the algorithm guarantees did not hold (exit code 4)."""


class ParseError(AutomsetError):
    """Malformed instance or result document (CLI exit code 3)."""
