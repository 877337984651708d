"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: precondition violations exit 2,
budget overruns exit 3, and internal-check failures exit 4.
"""


class MultableError(Exception):
    """Base class for all package errors."""


class PreconditionError(MultableError, ValueError):
    """An operation was called with inputs outside its contract."""


class BudgetError(MultableError, RuntimeError):
    """An operation would exceed its configured memory or enumeration budget."""


class InternalCheckError(MultableError, AssertionError):
    """A mathematically guaranteed inequality failed; indicates a bug."""


class RetriesExhaustedError(InternalCheckError):
    """A randomized search failed more often than the theory allows in practice."""
