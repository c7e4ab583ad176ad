"""Exception hierarchy shared by every module of the package."""


class PadicEntropyError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""


class ComputeError(PadicEntropyError):
    """A well-formed input that the requested computation cannot handle."""


class NotPrime(ComputeError):
    pass


class PrimeMismatch(ComputeError):
    pass


class PadicZeroDivisionError(ComputeError, ZeroDivisionError):
    pass


class ScalarParseError(PadicEntropyError, ValueError):
    pass


class NonSquare(ComputeError):
    pass


class DimensionMismatch(ComputeError):
    pass


class ZeroPolynomial(ComputeError):
    pass


class DuplicatePrime(ComputeError):
    pass


class NotASublattice(ComputeError):
    pass


class SingularBasis(ComputeError):
    pass


class NotStabilized(ComputeError):
    """The cotrajectory oracle could not certify a value.

    ``table`` holds the per-window evidence so callers can inspect it.
    """

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table if table is not None else []


class RingMismatch(ComputeError):
    pass


class IncompatibleEndo(ComputeError):
    pass


class UnsupportedCase(ComputeError):
    pass


class UnsupportedEndo(ComputeError):
    pass


class QuadraticCorrectionError(ComputeError):
    pass


class BudgetExceeded(ComputeError):
    pass


class MalformedDescriptor(PadicEntropyError, ValueError):
    pass


class NotApplicableError(ComputeError):
    pass


class SchemaError(PadicEntropyError, ValueError):
    pass
