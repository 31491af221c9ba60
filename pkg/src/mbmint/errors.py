"""Exception types shared across the package."""


class MbmintError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MbmintError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class QuadratureError(MbmintError, RuntimeError):
    """A numerical integration routine failed to reach its target accuracy."""


class FactorizationError(MbmintError, RuntimeError):
    """A covariance matrix could not be Cholesky-factorized, even with jitter."""


class AssumptionError(MbmintError, ValueError):
    """A Hurst function fails the standing regularity assumptions."""


class InvariantError(MbmintError, RuntimeError):
    """A mathematically guaranteed invariant was violated numerically."""


class ConfigError(MbmintError, ValueError):
    """A configuration file is malformed or contains unknown/invalid entries."""
