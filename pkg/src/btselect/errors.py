"""Exception hierarchy shared by the library and the command line."""


class BtSelectError(Exception):
    """Base class for all errors raised by btselect."""


class ConfigError(BtSelectError):
    """Invalid or conflicting configuration (CLI exit code 2)."""


class DataError(BtSelectError, ValueError):
    """Input data violates a contract (CLI exit code 3)."""


class AlignmentError(DataError):
    """Line counts of a pool's files disagree."""


class FactorError(DataError):
    """A system factor cannot be built from the given measurements."""

    def __init__(self, message, system=None):
        super().__init__(message)
        self.system = system
