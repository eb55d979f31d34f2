"""Exception taxonomy shared across the package.

Callers can rely on:
  DomainError   -- invalid mathematical input (subclass of ValueError)
  ResourceError -- a computation would exceed a configured size budget
  NumericError  -- quadrature/series failed to converge; carries diagnostics
  ParseError    -- malformed cache/eigen-table input; carries location info
"""


class MurmurError(Exception):
    """Base class for package-specific errors."""


class DomainError(MurmurError, ValueError):
    """An argument violates a documented precondition."""


class ResourceError(MurmurError):
    """A table or sieve would exceed the configured memory budget."""


class NumericError(MurmurError):
    """A numeric routine failed to reach the requested accuracy.

    Attributes
    ----------
    estimates : tuple
        Last two successive estimates, for post-mortem inspection.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class ParseError(MurmurError):
    """Malformed external data (cache file or eigenvalue table).

    Attributes
    ----------
    source : str
        File name or description of the data source.
    index : int
        Line or record index (0-based) where parsing failed, -1 if unknown.
    """

    def __init__(self, message, source="", index=-1):
        super().__init__(message)
        self.source = source
        self.index = index
