"""Exception types shared across the package."""


class DegenError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DegenError):
    """An argument lies outside the mathematical domain of the operation."""


class BracketError(DegenError):
    """A root bracket is invalid: the function does not change sign on it."""


class NonConvergence(DegenError):
    """An iterative scheme exhausted its budget without meeting its tolerance."""


class ParseError(DegenError):
    """A config file or CLI payload could not be parsed.

    Carries the 1-based line number when the source is a config file.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
