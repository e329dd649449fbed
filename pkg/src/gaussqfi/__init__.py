"""Quantum Cramer-Rao bounds for single-mode Gaussian states (hbar = 2)."""

from .errors import (
    ComputationError,
    DomainError,
    GaussQFIError,
)
from .gaussian import (
    GaussianState,
    StateParams,
    apply_loss,
    apply_loss_general,
    from_params,
    is_physical,
    purity,
    wigner,
)
from .fidelity import bures_distance, fidelity
from .qfi import (
    FisherMatrix,
    StateDerivative,
    crb_matrix,
    crb_single,
    qfi_matrix,
    qfi_single,
)
from .families import (
    FAMILY_NAMES,
    FIVE_PARAMS,
    ParamFamily,
    analytic_derivative,
    closed_form_qfi,
    off_diagonal_closed_form,
)

__version__ = "0.1.0"
