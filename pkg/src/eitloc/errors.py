"""Exception types raised across the package."""


class EitlocError(Exception):
    """Base class for all package errors."""


class ValidationError(EitlocError, ValueError):
    """A parameter or config field violates its constraint."""


class ParseError(EitlocError):
    """A config document could not be parsed."""


class DegenerateDenominator(EitlocError, ArithmeticError):
    pass


class AxisMismatch(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class InactiveChannel(EitlocError):
    """Metric requested for a channel whose signal fell below the activity threshold."""


class NoHalfCrossing(EitlocError):
    """The cross-section never drops below half maximum inside the grid."""


class AllInactive(EitlocError):
    pass
