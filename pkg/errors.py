# errors.py - exception hierarchy shared by every module


class SeriesError(Exception):
    """Base class for every error raised by the series toolkit"""


class DuplicateFactor(SeriesError):
    pass


class DegreeTooHigh(SeriesError):
    pass


class InvalidFactor(SeriesError):
    pass


class DivergentSeries(SeriesError):
    pass


class CapExceeded(SeriesError):
    pass


class PreconditionViolated(SeriesError):
    pass


class PrecisionOverflow(SeriesError):
    pass


class UnsupportedConstantBasis(SeriesError):
    pass


class GammaUnsupported(SeriesError):
    pass


class UnknownName(SeriesError):
    pass


class NoConvergence(SeriesError):
    pass


class LedgerFormatError(SeriesError):
    pass


class ParseError(SeriesError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
