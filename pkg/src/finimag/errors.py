"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: CheckFailure -> 1, InputError -> 2,
BudgetError -> 3.
"""


class FinimagError(Exception):
    pass


class InputError(FinimagError, ValueError):
    """Malformed data or a violated precondition."""


class CheckFailure(FinimagError, AssertionError):
    """A verification that the theory guarantees did not hold."""


class BudgetError(FinimagError, RuntimeError):
    """An exhaustive search would exceed the configured budget."""
