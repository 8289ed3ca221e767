"""Exception hierarchy shared by all cdiff modules."""


class CDiffError(ValueError):
    """Base class for every error raised by cdiff."""


class NonPrimeP(CDiffError):
    pass


class ReducibleModulus(CDiffError):
    pass


class DegreeMismatch(CDiffError):
    pass


class FieldMismatch(CDiffError):
    pass


class DivisionByZero(CDiffError, ZeroDivisionError):
    pass


class CharTwo(CDiffError):
    """Raised when an odd-characteristic operation is used over GF(2^n)."""


class CharMismatch(CDiffError):
    """Raised when a condition atom is evaluated in the wrong characteristic."""


class ZeroArgument(CDiffError):
    pass


class ExcludedPoint(CDiffError):
    pass


class BudgetExceeded(CDiffError):
    pass


class UnknownRule(CDiffError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class EvenN(CDiffError):
    pass


class SpecParseError(CDiffError):
    pass
