"""Exception hierarchy shared by every module."""


class DioexpError(Exception):
    """Base class for all library errors."""


class PrecisionExhausted(DioexpError):
    """A scalar cannot be refined to the requested number of bits."""


class InsufficientDepth(DioexpError):
    pass


class DependentColumns(DioexpError):
    """Basis vectors are linearly dependent."""


class UndecidableAtPrecision(DioexpError):
    """An enclosure straddles the threshold being tested; refine and retry."""


class SearchBudgetExceeded(DioexpError):
    pass


class EmptyTail(DioexpError):
    pass


class DomainError(DioexpError, ValueError):
    """Argument outside the domain of a formula."""


class ZeroPolynomial(DomainError):
    pass


class GradeOverflow(DioexpError):
    pass


class DimensionMismatch(DioexpError, ValueError):
    pass


class DecompositionMismatch(DioexpError):
    """The two evaluations of the unipotent action on a multivector disagree."""


class InconsistentPair(DomainError):
    """An (omega, sigma) pair violates Khintchine transference."""


class ParseError(DioexpError, ValueError):
    pass
