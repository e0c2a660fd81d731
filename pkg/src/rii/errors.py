"""Exception types raised across the package."""


class RIIError(Exception):
    """Base class for all errors raised by :mod:`rii`."""


class NotAUnit(RIIError, ZeroDivisionError):
    """A power series with zero constant term was asked to be inverted."""


class UnboundVariable(RIIError, KeyError):
    """Numeric evaluation met a variable missing from the assignment."""


class ModeMismatch(RIIError, ValueError):
    """An operation was applied to a family of the wrong mode."""


class InadmissibleFamily(RIIError, ValueError):
    """Some index has lambda_n, a_n and c_n all identically zero."""


class UnsupportedNumericClass(RIIError, ValueError):
    """A numeric family was summed over an infinite path class."""


class UnsupportedPattern(RIIError, ValueError):
    """The zero pattern of the family does not allow the requested method."""


class InternalInconsistency(RIIError, ArithmeticError):
    """An identity guaranteed by the theory failed; indicates a bug."""


class InvalidPair(RIIError, ValueError):
    """A (path, tiling) pair is not an element of the involution's domain."""


class OutOfDomain(RIIError, ValueError):
    """A numeric parameter lies outside the region of convergence."""


class ConvergenceError(RIIError, ArithmeticError):
    """A numeric series did not reach its tolerance within the term budget."""
