"""Exception hierarchy shared by every gstower module."""


class GsTowerError(Exception):
    """Base class for all library errors."""


class ParameterError(GsTowerError, ValueError):
    """Operands disagree on (d, N, p) or a parameter is out of its domain."""


class CapacityError(GsTowerError):
    """Request exceeds the desk-scale budget of the truncated algebra."""


class NonUnitError(GsTowerError, ArithmeticError):
    """Inversion of a series whose constant term vanishes."""


class WordSyntaxError(GsTowerError, ValueError):
    """Malformed group word. ``position`` is the 0-based offset of the problem."""

    def __init__(self, message, position=None):
        self.position = position
        self.detail = message
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NonMinimalPresentationError(GsTowerError, ValueError):
    """A relator has depth 1, so the presentation is not minimal."""


class InconclusiveError(GsTowerError):
    """The computation could not certify an answer at the available resolution."""


class InadmissibleCutError(GsTowerError, ValueError):
    """A cutting datum contains an element of depth < 2."""


class ModelError(GsTowerError, ValueError):
    """Tower, decomposition or class-group model violates its invariants."""


class HypothesisError(GsTowerError):
    """Tower hypotheses fail; ``report`` carries the failing comparisons."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)
