"""Closed-form fidelity and Bures distance between single-mode Gaussian states."""

from __future__ import annotations

import math

from .errors import ComputationError, DegenerateFidelityError
from .gaussian import GaussianState, det2

MAX_EXCESS = 1e-9


def fidelity(a: GaussianState, b: GaussianState) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(a) b sqrt(a)))**2`` of two Gaussian states.

    Uses the closed form

        F = 2 exp(-dX^T (S1 + S2)^-1 dX / 2) / (sqrt(D + d) - sqrt(d))

    with ``D = det(S1 + S2)`` and ``d = (1 - det S1)(1 - det S2)``. The
    denominator is evaluated as ``D / (sqrt(D + d) + sqrt(d))`` which is the
    same number without the cancellation.
    """
    total = a.cov + b.cov
    big = det2(total)
    if big < 1e-200:
        raise DegenerateFidelityError(f"det(S1 + S2) = {big!r} is degenerate")
    # det >= 1 for both states, so the product is >= 0 up to rounding
    small = max((1.0 - a.det) * (1.0 - b.det), 0.0)
    denom = big / (math.sqrt(big + small) + math.sqrt(small))
    if denom < 1e-300:
        raise DegenerateFidelityError("fidelity denominator underflowed")
    dx = a.mean - b.mean
    # adjugate of the symmetric 2x2 sum, divided by its determinant
    quad = (
        total[1, 1] * dx[0] * dx[0]
        - 2.0 * total[0, 1] * dx[0] * dx[1]
        + total[0, 0] * dx[1] * dx[1]
    ) / big
    f = 2.0 * math.exp(-0.5 * quad) / denom
    if f > 1.0 + MAX_EXCESS:
        raise ComputationError(f"fidelity {f!r} exceeds 1 beyond tolerance")
    return min(f, 1.0)


def infidelity(a: GaussianState, b: GaussianState) -> float:
    return 1.0 - fidelity(a, b)


def bures_distance(a: GaussianState, b: GaussianState) -> float:
    """``sqrt(2 - 2 sqrt(F))``, computed via ``2 (1 - F) / (1 + sqrt(F))``."""
    f = fidelity(a, b)
    return math.sqrt(2.0 * (1.0 - f) / (1.0 + math.sqrt(f)))

