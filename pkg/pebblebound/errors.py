"""
pebblebound/errors.py
Exception hierarchy. The CLI maps each family to an exit code.
"""


class PebbleboundError(Exception):
    """Base class for every error raised by the package."""
    exit_code = 1


class ConfigurationError(PebbleboundError):
    """Bad flags, policy files, profile files or missing backends."""
    exit_code = 2


class CatalogError(ConfigurationError):
    """Unknown catalog graph name or malformed graph text."""


class MetricError(ConfigurationError):
    """Distances requested on a disconnected graph."""


class SerializationError(ConfigurationError):
    """A model or report could not be written or read back."""


class FeasibilityError(PebbleboundError):
    """The exact checker was handed an incomplete assignment."""


class BackendError(PebbleboundError):
    """A solver run crashed or produced output that could not be parsed."""
    exit_code = 3

    def __init__(self, message: str, diagnostics: str = ""):
        super().__init__(message)
        self.diagnostics = diagnostics


class IntegrityError(BackendError):
    """A solver incumbent failed exact re-verification."""


class OracleBudgetError(PebbleboundError):
    """The exhaustive pebbling search exceeded its node budget."""
    exit_code = 4
