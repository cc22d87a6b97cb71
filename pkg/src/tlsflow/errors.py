"""Exception types shared across the package."""


class TlsflowError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TlsflowError, ValueError):
    """Argument outside the physical domain (e.g. nonpositive frequency)."""


class DressedFrameError(TlsflowError, ValueError):
    """Dressed frame undefined or produces a nonpositive transition frequency."""


class SteadyStateError(TlsflowError, RuntimeError):
    """Steady state missing, non-unique, or numerically unreliable."""


class ConfigError(TlsflowError, ValueError):
    """Invalid CLI / config-file input. Maps to process exit code 2."""
