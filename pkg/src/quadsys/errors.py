"""Exception hierarchy shared by every module in the package."""


class QuadsysError(Exception):
    """Base class for all errors raised by quadsys."""


class ZeroDenominator(QuadsysError, ZeroDivisionError):
    pass


class DivisionByZero(QuadsysError, ZeroDivisionError):
    pass


class PrecisionExhausted(QuadsysError, ArithmeticError):
    """Too few significant digits remain to decide a value."""


class ContextMismatch(QuadsysError, ValueError):
    pass


class ZeroInput(QuadsysError, ValueError):
    pass


class NotASquare(QuadsysError, ValueError):
    pass


class EvenPrime(QuadsysError, ValueError):
    pass


class NonUnit(QuadsysError, ValueError):
    pass


class TrivialVector(QuadsysError, ValueError):
    pass


class DimensionMismatch(QuadsysError, ValueError):
    pass


class SingularMatrix(QuadsysError, ValueError):
    pass


class HenselCriterionFails(QuadsysError, ValueError):
    pass


class NoZeroFoundBelowGuarantee(QuadsysError):
    """The solver gave up below its guaranteed range.

    This is *not* a proof that the system is anisotropic.
    """


class DimensionShortfall(QuadsysError):
    pass


class MissingTableEntry(QuadsysError, KeyError):
    pass


class SearchSpaceTooLarge(QuadsysError, ValueError):
    pass


class ZeroExists(QuadsysError):
    def __init__(self, zero):
        super().__init__(f"primitive zero exists: {zero}")
        self.zero = zero
