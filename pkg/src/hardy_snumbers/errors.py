"""Exception hierarchy shared by every module."""


class HardyError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HardyError, ValueError):
    """Malformed or inadmissible input (bad samples, mismatched grids, bad config)."""


class DomainError(HardyError, ValueError):
    """An argument lies outside the domain of the operation (empty interval, point outside J)."""


class NumericError(HardyError, RuntimeError):
    """An iterative solver failed to converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ResolutionError(NumericError):
    """The request needs finer resolution than the grid provides."""
