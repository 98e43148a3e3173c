"""Exception taxonomy shared by the library and the command line."""


class QJacobiError(Exception):
    """Base class for all errors raised by :mod:`qjacobi`."""


class DomainError(QJacobiError, ValueError):
    """Parameters lie outside the region where a quantity is defined."""


class NonConvergence(QJacobiError, ArithmeticError):
    """A series or product hit its term cap before meeting the tolerance."""


class DenominatorPole(QJacobiError, ZeroDivisionError):
    """A denominator q-Pochhammer factor vanished before the series terminated."""


class ConvergenceFailure(QJacobiError, ArithmeticError):
    """The tridiagonal eigensolver did not converge."""
