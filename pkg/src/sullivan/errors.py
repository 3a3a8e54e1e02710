"""Exception hierarchy shared by the whole package."""


class SullivanError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(SullivanError, ValueError):
    """A precondition of an operation was not met by its inputs."""


class ValidationError(SullivanError, ValueError):
    """A model (algebra, morphism, extension, ...) failed validation.

    ``details`` carries machine-readable information about what failed,
    e.g. the offending generator and residual polynomial.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class InternalInconsistency(SullivanError, RuntimeError):
    """Two independent computations disagree; this signals a bug."""
