"""Shared exception types.

Domain errors (bad inputs, unsatisfiable requests) map to CLI exit code 2,
limit errors (enumeration guards, growth budgets) to exit code 3.
"""


class MultiformError(Exception):
    exit_code = 2


class NotGenericHere(MultiformError):
    """No dual tuple exists for the requested subspace in this ambient space."""


class NoSolution(MultiformError):
    """The pairing system is inconsistent, or every solution is spanned by the
    vectors that were supposed to be avoided."""


class InsufficientHeadroom(MultiformError):
    """Ambient space too cramped for the equivalence decision to be meaningful."""


class TargetExhausted(MultiformError):
    """The image ambient space has no capacity left; extend it and retry."""


class LimitError(MultiformError):
    exit_code = 3


class TooLarge(LimitError):
    """Exhaustive enumeration would exceed the configured budget."""


class BudgetExceeded(LimitError):
    """Search budget exceeded before an answer was found."""
