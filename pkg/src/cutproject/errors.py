"""Exception hierarchy shared by all modules.

Errors fall into two families that the command line maps to exit codes:
bad inputs (exit 2) and exhausted depth or search budgets (exit 3).
"""


class CutProjectError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class PreconditionViolated(CutProjectError, ValueError):
    """An operation was called with inputs outside its domain."""

    exit_code = 2


class RationalRotation(PreconditionViolated):
    """The requested rotation number is rational."""


class ZeroDenominator(PreconditionViolated):
    """A rotation number was given with denominator zero."""


class EmptyWindow(PreconditionViolated):
    """The window has empty interior."""


class BudgetExceeded(CutProjectError, RuntimeError):
    """A depth or search budget ran out; a deeper or longer run may succeed."""

    exit_code = 3


class DepthOverflow(BudgetExceeded):
    """A return time or partition size exceeds the configured integer budget."""


class SearchExhausted(BudgetExceeded):
    """No admissible orbit index was found within the search budget."""


class GermUndecidable(BudgetExceeded):
    """A local germ is finer than the construction depth can resolve."""
