"""Exception types shared across the package."""


class DelayStabError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DelayStabError):
    """Malformed expression text; ``offset`` is the byte position."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class EvalDomainError(DelayStabError):
    """Expression evaluation left the finite reals."""


class PreconditionError(DelayStabError):
    """A stability condition is unusable for the given equation."""


class SpecFileError(DelayStabError):
    """Equation spec file is malformed or inconsistent."""
