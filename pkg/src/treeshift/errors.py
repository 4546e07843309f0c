"""Exception hierarchy shared by every module."""


class TreeShiftError(Exception):
    """Base class for all errors raised by :mod:`treeshift`."""


class ValidationError(TreeShiftError, ValueError):
    """Input does not satisfy a documented precondition."""


class ParseError(ValidationError):
    """Malformed text input. ``lineno`` is 1-based, or None when not line-oriented."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnrealizableError(ValidationError):
    """A monomial coefficient exceeds the number of distinct orderings of its factors."""


class BudgetExceeded(TreeShiftError):
    """An enumeration or exact evaluation would exceed its configured size budget."""
