"""Exception types raised across the package."""


class HPOError(Exception):
    """Base class for all package errors."""


class UnboundedSymbol(HPOError, ValueError):
    """Symbol w -> a*w + b does not satisfy a > 0 and Re(b) >= 0."""


class NotAutomorphism(HPOError, ValueError):
    """The inverse symbol would leave the bounded class."""


class OutsideDomain(HPOError, ValueError):
    """A point is not in the open right half-plane."""


class DegenerateSymbol(HPOError, ArithmeticError):
    pass


class NoConvergence(HPOError, ArithmeticError):
    pass


class QuadratureDivergence(HPOError, ArithmeticError):
    pass


class UnknownSuite(HPOError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
