"""Exception hierarchy shared by the library and the CLI."""


class NCARDError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(NCARDError, ValueError):
    """Invalid parameter value (fractions, eps, k-distance order, ...)."""


class DimensionMismatch(NCARDError, ValueError):
    pass


class Degenerate(NCARDError, ValueError):
    """Apollonius ratio is 1: the locus is a hyperplane, not a circle."""


class CoincidentPoint(NCARDError, ValueError):
    pass


class EmptyPool(NCARDError, ValueError):
    pass


class DataError(NCARDError):
    """Base for problems with user-supplied data (CLI exit code 2)."""


class ParseError(DataError, ValueError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyInput(DataError, ValueError):
    pass


class InsufficientData(DataError, ValueError):
    """Too few distinct points for the requested computation."""


class GenerationError(DataError, RuntimeError):
    pass
