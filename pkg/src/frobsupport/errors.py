"""Exception types shared across the package."""


class FrobSupportError(Exception):
    """Base class for all errors raised by frobsupport."""


class ParseError(FrobSupportError):
    """Malformed polynomial or problem-file text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ShapeError(FrobSupportError, ValueError):
    """Matrix or vector dimensions do not fit together."""


class ResourceLimitError(FrobSupportError):
    """A configured resource cutoff was hit; the result would be unreliable.

    ``stage`` names the computation that gave up (e.g. ``"groebner"``,
    ``"minors"``, ``"ext_gm"``).
    """

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class NonTerminationError(FrobSupportError):
    """The fixed-point iteration did not stabilize within ``max_iter`` steps."""

    def __init__(self, max_iter, message=None):
        self.max_iter = max_iter
        super().__init__(message or f"no fixed point after {max_iter} iterations")


class BoundViolationError(FrobSupportError, AssertionError):
    """A proven degree bound failed at runtime: this indicates an arithmetic bug."""
