class GammoidError(Exception):
    """Base class for domain errors raised by this package."""


class GraphFormatError(GammoidError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"{message}, line {line}"
        super().__init__(message)


class BudgetExceeded(GammoidError):
    """An exhaustive enumeration or search would exceed its configured budget."""


class NotExactError(GammoidError):
    """A set or graph lacks the exactness an operation relies on."""


class LinkabilityError(GammoidError):
    """Some finite set of sources cannot be linked although the caller promised it could."""
