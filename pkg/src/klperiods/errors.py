"""Exception hierarchy shared by all modules."""


class KlPeriodsError(Exception):
    pass


class DomainError(KlPeriodsError, ValueError):
    pass


class NonConvergent(KlPeriodsError, ArithmeticError):
    pass


class Singular(KlPeriodsError, ArithmeticError):
    pass


class ShapeMismatch(KlPeriodsError, ValueError):
    pass


class DivergentMoment(DomainError):
    pass


class TruncationTooShort(KlPeriodsError):
    pass


class ResidueObstruction(KlPeriodsError):
    pass


class ZeroOperator(DomainError):
    pass


class OddExponent(DomainError):
    pass


class MismatchError(KlPeriodsError, AssertionError):
    pass


class PrecisionTooLow(KlPeriodsError):
    pass
