"""Exception types shared across the library."""


class CsymError(Exception):
    """Base class for all library-specific errors."""


class NonFiniteError(CsymError):
    """A matrix or vector contains NaN or infinite entries."""


class DimensionMismatchError(CsymError):
    """Operands have incompatible shapes."""


class NotHermitianError(CsymError):
    """Input is not Hermitian within the documented tolerance."""


class NoConvergenceError(CsymError):
    """An iterative kernel exceeded its iteration budget."""


class NumericalBreakdownError(CsymError):
    """A randomized construction stalled beyond its retry budget."""


class NumericalAmbiguityError(CsymError):
    """A rank or dimension decision sits too close to its threshold.

    Carries the offending report on the ``report`` attribute when available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotCSymmetricError(CsymError):
    """The supplied conjugation does not certify the matrix within tolerance."""


class EpsTooSmallError(CsymError):
    """Requested perturbation budget is below the rounding floor."""


class DegenerateKernelError(CsymError):
    """A point was flagged spectral but no kernel vector met the tolerance."""


class BudgetExhaustedError(CsymError):
    """Sequential perturbation retries failed; ``partial`` holds progress so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotUnitaryError(CsymError):
    """Matrix expected to be unitary is not, within tolerance."""


class NotNormalError(CsymError):
    """Matrix expected to be normal is not, within tolerance."""


class NotPositiveError(CsymError):
    """Matrix expected to be positive semidefinite is not."""


class NotCommutingError(CsymError):
    """Matrices expected to commute do not, within tolerance."""


class InvalidSpecError(CsymError):
    """A builder spec or serialized object is malformed or inconsistent."""
