"""Exception hierarchy shared by every bohrkit module."""


class BohrkitError(Exception):
    pass


class InvalidInputError(BohrkitError, ValueError):
    """Malformed input: wrong shape, non-finite entries, bad parameters."""


class DomainError(BohrkitError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class SingularMatrixError(BohrkitError, ArithmeticError):
    pass


class PreconditionError(BohrkitError, ValueError):
    pass


class UnsupportedClassError(BohrkitError, TypeError):
    """The series class tag does not carry the certificate the caller needs."""


class NoRootError(BohrkitError, ArithmeticError):
    pass


class AmbiguousRootError(BohrkitError, ArithmeticError):
    def __init__(self, message, brackets):
        super().__init__(message)
        self.brackets = list(brackets)


class InternalInconsistencyError(BohrkitError, AssertionError):
    """A numerically checked claim (bound, root location) did not hold."""
