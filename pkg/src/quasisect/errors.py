"""Exception hierarchy shared by every module of the package."""


class QuasiSectorialError(Exception):
    """Base class for all errors raised by :mod:`quasisect`."""


class NotHermitian(QuasiSectorialError, ValueError):
    """Raised when a matrix handed to the Hermitian eigensolver is not Hermitian."""


class NoConvergence(QuasiSectorialError, ArithmeticError):
    """Raised when an iterative kernel exceeds its iteration cap."""


class Singular(QuasiSectorialError, ArithmeticError):
    """Raised when a linear solve meets a pivot below the singularity threshold.

    For resolvents this signals that the shift is (numerically) an eigenvalue.
    """


class Overflow(QuasiSectorialError, OverflowError):
    """Raised when the matrix exponential would leave the representable range."""


class OutOfRange(QuasiSectorialError, ValueError):
    """Raised when a curve parameter lies outside its admissible interval."""


class NotSectorial(QuasiSectorialError, ValueError):
    """Raised when a numerical range reaches into the open left half-plane."""


class DegenerateFit(QuasiSectorialError, ValueError):
    """Raised when too few points survive the noise floor for a rate fit."""
