class LinodeError(Exception):
    """Base class for all library errors."""


class DivisionByZero(LinodeError, ZeroDivisionError):
    pass


class CutoffExceeded(LinodeError):
    pass


class ParseError(LinodeError, SyntaxError):
    pass


class NotSolvedForHighest(LinodeError):
    pass


class JetOrderError(LinodeError):
    pass


class NotCubicForm(LinodeError):
    pass


class UnknownsPresent(LinodeError):
    pass


class DegenerateTransformation(LinodeError):
    pass
