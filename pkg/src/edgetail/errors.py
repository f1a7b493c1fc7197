"""Exception types shared across the package."""


class EdgetailError(Exception):
    """Base class for all package-specific errors."""


class DomainError(EdgetailError):
    """A numeric argument lies outside the domain of the requested quantity."""


class OrderError(EdgetailError):
    """A parameter vector violates its required monotonicity constraints."""


class SizeError(EdgetailError):
    """A size/count argument is infeasible (empty block, n too large, ...)."""


class FormatError(EdgetailError):
    """Malformed external data (graph files, config files, records)."""


class ZeroVectorError(EdgetailError):
    """A quadratic form was requested on the zero vector."""


class NotAForestError(EdgetailError):
    """An operation restricted to forests received a graph with a cycle."""


class ConvergenceError(EdgetailError):
    """An iterative eigenvalue solve failed its residual contract.

    Carries whatever partial results were available in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotFoundError(EdgetailError):
    """A required combinatorial object (clique / independent set) was not found."""


class ConfigError(EdgetailError):
    """Inconsistent or invalid configuration values."""


class InsufficientDataError(EdgetailError):
    """Not enough data points for the requested fit."""
