"""Exception hierarchy.

Two families matter to callers: :class:`DomainError` for inputs outside the
admissible parameter set (a ``ValueError``) and :class:`ComputationError` for
numerical failures on otherwise valid inputs. The CLI maps them to exit codes
2 and 3 respectively.
"""


class GaussQFIError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GaussQFIError, ValueError):
    """Parameters or states outside the admissible domain."""


class ComputationError(GaussQFIError, ArithmeticError):
    """A numerical procedure could not produce a trustworthy result."""


class DegenerateFidelityError(ComputationError):
    pass


class SingularCovarianceError(ComputationError):
    pass


class PurityBoundaryError(ComputationError):
    """Purity derivative is non-zero at the pure-state boundary."""


class ZeroInformationError(ComputationError):
    """The parameter carries no information and cannot be estimated."""


class SingularFisherError(ComputationError):
    """The Fisher matrix is not invertible.

    ``direction`` holds the (normalised) null-space combination of parameters
    when it could be determined.
    """

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction


class StepTooSmallError(ComputationError):
    """Finite-difference step drowned in floating point cancellation."""


class SmoothnessError(ComputationError):
    """Fidelity has a non-vanishing first derivative at coincidence."""


class TruncationError(ComputationError):
    """Fock-space truncation is too small for the requested state."""
