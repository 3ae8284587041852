"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class BudgetError(RuntimeError):
    """An enumeration or pairwise scan would exceed its resource budget."""


class InconsistencyError(ArithmeticError):
    """Two quantities that must agree exactly do not.

    Raised instead of silently rounding when a count produced through complex
    arithmetic is not within tolerance of an integer, or when two evaluation
    routes of the same exact quantity disagree.
    """
