"""Exception types shared across the package."""


class WgofError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WgofError, ValueError):
    """Invalid configuration, unknown family or preset, or bad budget."""


class DomainError(WgofError, ValueError):
    """A parameter or input lies outside its admissible range."""


class DegenerateSampleError(WgofError, ValueError):
    """The sample cannot support the requested estimate (ties, singular covariance)."""


class NumericError(WgofError, ArithmeticError):
    """Non-finite values or non-convergence inside a numerical routine."""


class UnsupportedOperationError(WgofError, NotImplementedError):
    """The distribution lacks the capability required by the call."""


class CvfIOError(WgofError, OSError):
    """Corrupt, truncated or version-mismatched persisted file."""
