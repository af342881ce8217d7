"""Exception hierarchy shared by every stage of the pipeline."""


class RefactorEffortError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(RefactorEffortError):
    """Unreadable repository, unresolvable branch, bad parameters."""


class ContractViolation(RefactorEffortError):
    """A caller broke a documented precondition."""


class DataError(RefactorEffortError):
    """Malformed input data (files, rows, schemas)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
