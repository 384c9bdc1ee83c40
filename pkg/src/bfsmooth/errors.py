"""Exception hierarchy shared by all bfsmooth modules."""


class BfsmoothError(Exception):
    """Base class for all library errors."""


class ParameterError(BfsmoothError, ValueError):
    """A kernel/solver parameter is out of its valid range."""


class InputError(BfsmoothError, ValueError):
    """User-supplied data is malformed (duplicates, NaN, bad shapes)."""


class UnisolvencyError(BfsmoothError, ValueError):
    """A point set fails the required unisolvency condition."""


class SolveError(BfsmoothError, RuntimeError):
    """A linear solve failed or its residual exceeded tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ContractError(BfsmoothError, ValueError):
    """A model violates an internal constraint (e.g. P_Z^T v != 0)."""


class ParseError(BfsmoothError, ValueError):
    """A text input (CSV, kernel spec, grid spec, model file) failed to parse."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SearchError(BfsmoothError, RuntimeError):
    """An iterative parameter search hit non-finite values."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
