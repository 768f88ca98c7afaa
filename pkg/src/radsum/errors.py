"""Exception hierarchy shared across the toolkit.

ValidationError maps to CLI exit code 2, UsageError to exit code 1.
"""


class RadsumError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(RadsumError):
    """Input data failed a contract (bad file, bad record, degenerate data)."""


class UsageError(RadsumError):
    """Caller supplied an out-of-range or inconsistent argument."""
