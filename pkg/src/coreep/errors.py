"""Exception hierarchy shared by the toolkit."""


class CoreEPError(Exception):
    """Base class for every error raised by this package."""


class MatrixFormatError(CoreEPError, ValueError):
    """Malformed matrix input (bad JSON, wrong length, non-finite entries)."""


class ShapeError(CoreEPError, ValueError):
    pass


class NumericalFailure(CoreEPError):
    """A computed result failed its defining identities.

    ``residuals`` maps identity names to the residual that was observed.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class NoGroupInverse(CoreEPError):
    pass


class NoBCInverse(CoreEPError):
    pass


class RouteMismatch(NumericalFailure):
    """The three core-EP routes disagree; ``candidates`` holds each route's matrix."""

    def __init__(self, message, candidates, residuals=None):
        super().__init__(message, residuals)
        self.candidates = dict(candidates)


class OrderViolation(CoreEPError):
    pass


class InconsistentSpec(CoreEPError, ValueError):
    pass
