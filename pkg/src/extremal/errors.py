"""Exception types raised across the package."""


class ExtremalError(Exception):
    pass


class InvalidElementError(ExtremalError, ValueError):
    pass


class WindowTooSmallError(ExtremalError):
    pass


class UnsupportedReductionError(ExtremalError):
    pass


class InnerSupNotExactError(ExtremalError):
    """The test domain of a density game cannot be enumerated exactly."""


class UnsupportedGroupError(ExtremalError):
    pass


class EmptySupportError(ExtremalError, ValueError):
    pass


class InvalidPatternError(ExtremalError, ValueError):
    pass


class UndefinedIndexError(ExtremalError, ValueError):
    pass


class NotAPartitionError(ExtremalError, ValueError):
    pass


class CapacityError(ExtremalError, ValueError):
    pass


class ParseError(ExtremalError, ValueError):
    def __init__(self, message, line, column, expected):
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(f"{message} at line {line}, column {column} (expected {expected})")


class LPError(ExtremalError):
    pass


class InfeasibleError(LPError):
    pass


class UnboundedError(LPError):
    pass


class SetTypeError(ExtremalError, TypeError):
    """A set expression uses a construct that does not fit the declared group."""
