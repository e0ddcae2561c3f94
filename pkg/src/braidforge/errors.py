"""Exception hierarchy shared by every module."""


class BraidforgeError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInputError(BraidforgeError, ValueError):
    """Malformed input: wrong shape, non-finite entries, bad indices."""


class PreconditionError(BraidforgeError):
    """A mathematical precondition of an operation does not hold."""


class ResourceGuardError(BraidforgeError):
    """A construction would exceed the configured size limit."""


class ParseError(BraidforgeError, ValueError):
    """A text or file representation could not be parsed."""
