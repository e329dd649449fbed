"""Fisher information by numerical differentiation of the closed-form fidelity.

Independent of the analytic derivative machinery: only the state map
``theta -> GaussianState`` and :func:`gaussqfi.fidelity.fidelity` are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import SmoothnessError, StepTooSmallError
from .fidelity import fidelity
from .gaussian import GaussianState

EPS = 2.220446049250313e-16
CANCEL = 1e3 * EPS

StateMap = Callable[[float], GaussianState]


def default_step(theta0: float) -> float:
    return 1e-3 * max(1.0, abs(theta0))


def _is_constant(s0: GaussianState, others) -> bool:
    return all(s0.allclose(s, rtol=1e-14, atol=1e-14) for s in others)


def _check_step(deficits, h):
    if max(abs(x) for x in deficits) < CANCEL:
        raise StepTooSmallError(
            f"h={h:g}: fidelity differs from 1 by less than {CANCEL:.1e}; increase h"
        )


def fidelity_curvature(states: StateMap, theta0: float, h: float) -> float:
    """Plain central-difference estimate ``-2 d^2F/de^2`` at step ``h``."""
    s0 = states(theta0)
    fp = fidelity(s0, states(theta0 + h))
    fm = fidelity(s0, states(theta0 - h))
    return -2.0 * ((fp - 1.0) + (fm - 1.0)) / (h * h)


def _first_difference(fp, fm, h, slack=0.1):
    # smooth: |first| ~ h^2 while h * curvature ~ h; a kink makes them comparable
    first = (fp - fm) / (2.0 * h)
    curvature = abs((fp - 1.0) + (fm - 1.0)) / (h * h)
    allowed = slack * h * max(1.0, curvature) + CANCEL / h
    if abs(first) > allowed:
        raise SmoothnessError(
            f"dF/de at e=0 is {first:.3e} (allowed {allowed:.3e} at h={h:g})"
        )
    return first


def check_smoothness(states: StateMap, theta0: float, h: float, slack: float = 0.1) -> float:
    """Central first difference of ``F(theta0, theta0 + e)`` at ``e = 0``.

    Must be ``O(h)``; raises :class:`SmoothnessError` otherwise.
    """
    s0 = states(theta0)
    fp = fidelity(s0, states(theta0 + h))
    fm = fidelity(s0, states(theta0 - h))
    return _first_difference(fp, fm, h, slack)


def qfi_from_fidelity(states: StateMap, theta0: float, h: float | None = None) -> float:
    """QFI as ``-2 d^2F/de^2`` with one Richardson step (h, h/2)."""
    if h is None:
        h = default_step(theta0)
    if not h > 0:
        raise ValueError("h must be positive")
    s0 = states(theta0)
    neighbours = [states(theta0 + e) for e in (h, -h, 0.5 * h, -0.5 * h)]
    if _is_constant(s0, neighbours):
        return 0.0
    fp, fm, fhp, fhm = (fidelity(s0, s) for s in neighbours)
    _check_step([fp - 1.0, fm - 1.0], h)

    _first_difference(fp, fm, h)

    coarse = -2.0 * ((fp - 1.0) + (fm - 1.0)) / (h * h)
    fine = -2.0 * ((fhp - 1.0) + (fhm - 1.0)) / (0.25 * h * h)
    return (4.0 * fine - coarse) / 3.0


@dataclass(frozen=True)
class BuresEstimate:
    """One-sided Bures-distance estimates of the QFI at steps h, h/2 and h/4."""

    value: float
    value_half: float
    value_quarter: float
    h: float

    @property
    def extrapolated(self) -> float:
        """Limit ``e -> 0`` of a quadratic fit through the three quotients.

        The one-sided quotient carries a linear error term for generic
        families and a quadratic one for unitary (even) families.
        """
        r1 = 2.0 * self.value_half - self.value
        r2 = 2.0 * self.value_quarter - self.value_half
        return (4.0 * r2 - r1) / 3.0


def qfi_from_bures(states: StateMap, theta0: float, h: float | None = None) -> BuresEstimate:
    """QFI as ``4 (d_Bures(theta0, theta0 + h) / h)^2``."""
    if h is None:
        h = default_step(theta0)
    if not h > 0:
        raise ValueError("h must be positive")
    steps = (h, 0.5 * h, 0.25 * h)
    s0 = states(theta0)
    others = [states(theta0 + e) for e in steps]
    if _is_constant(s0, others):
        return BuresEstimate(0.0, 0.0, 0.0, h)
    fids = [fidelity(s0, s) for s in others]
    _check_step([fids[0] - 1.0], h)

    def estimate(f, step):
        d2 = 2.0 * (1.0 - f) / (1.0 + math.sqrt(f))
        return 4.0 * d2 / (step * step)

    return BuresEstimate(*(estimate(f, e) for f, e in zip(fids, steps)), h)
