"""Exception hierarchy shared across the package.

Each class corresponds to a distinct CLI exit code (see ``bathtub.cli``).
"""


class BathtubError(Exception):
    """Base class for all package errors."""


class ConfigError(BathtubError):
    """Malformed configuration file or option set."""


class DomainError(BathtubError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(BathtubError):
    """An iterative procedure failed to converge or exceeded its error budget."""


class CoverageError(BathtubError):
    """The eigenvalue source does not cover the requested energy window."""


class IsolationError(BathtubError):
    """A time-side window overlaps more classical periods than permitted."""
