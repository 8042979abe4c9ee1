"""Exception types shared across the package."""


class NilweylError(Exception):
    """Base class for all library errors."""


class NumericError(NilweylError):
    """A fixed-point computation could not be certified."""


class AmbiguousBoundary(NumericError):
    """A floor or fractional part straddles an integer within the error radius."""


class PrecisionExhausted(NumericError):
    """An integer scale factor exceeds the guard-bit budget."""


class DimensionMismatch(NilweylError, ValueError):
    pass


class EmptyRange(NilweylError, ValueError):
    pass


class BadWindow(NilweylError, ValueError):
    """Van der Corput window H must satisfy 0 <= H < N."""


class GridTooCoarse(NilweylError):
    """The Lipschitz slack of a sup estimate exceeds the caller's bound."""


class DegenerateFit(NilweylError, ValueError):
    pass
