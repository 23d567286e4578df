"""Exception hierarchy shared by every module in the package."""


class WasserInferError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WasserInferError, ValueError):
    """An argument is outside its mathematical domain (t, p, alpha, theta, cutoff, ...)."""


class EmptySample(WasserInferError, ValueError):
    """A sample was constructed from zero observations."""


class NonFiniteValue(WasserInferError, ValueError):
    """A sample or evaluation contains NaN or infinity where finite reals are required."""


class SampleTooSmall(WasserInferError, ValueError):
    """An estimator needs more observations than the sample provides."""


class NumericalError(WasserInferError, ArithmeticError):
    """A numerical routine produced non-finite intermediates and cannot continue."""


class MissingColumn(WasserInferError, KeyError):
    """A named CSV column is absent from the header."""


class ParseError(WasserInferError, ValueError):
    """A CSV cell could not be interpreted; the message names the offending line."""


class EmptyGroup(WasserInferError, ValueError):
    """A protected group contains no rows after filtering."""


class SingularMatrix(WasserInferError, ArithmeticError):
    """A linear solve failed even after the ridge fallback."""


class NotConvergedWarning(UserWarning):
    """An iterative fit hit its iteration cap before meeting the tolerance."""
