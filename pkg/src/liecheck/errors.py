"""Shared exception types.

Three kinds of failure, mapped to CLI exit codes by report_cli:
bad arguments or preconditions (UsageError, exit 2), a registry case that
does not exist (UnknownCaseError, exit 3), and data that fails to build
consistently (ConstructionError, also exit 2 since it only happens on
hand-edited input).
"""


class LiecheckError(ValueError):
    """Base class for all errors raised by this package."""


class UsageError(LiecheckError):
    """Bad argument, dimension mismatch, or violated precondition."""


class UnknownCaseError(UsageError):
    """Requested case is not in the registry."""


class ConstructionError(LiecheckError):
    """Input data does not assemble into a valid object."""
