"""Optimal phase sensitivity at fixed total photon number.

For a pure state with ``chi = 0`` and total photon number
``N = alpha^2 + sinh(r)^2``, the phase information is maximised over the
fraction ``f = alpha^2 / N`` of photons put into the displacement. The
squeezing is taken along the phase quadrature (``r <= 0``, ``sigma >= 1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .families import ParamFamily, closed_form_qfi
from .gaussian import StateParams

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(fn, lo: float, hi: float, tol: float = 1e-10):
    """Maximise a unimodal ``fn`` on ``[lo, hi]``.

    Returns ``(x, fn(x))`` where ``x`` is the best of the final bracket and its
    end points, so maxima on the boundary are found exactly.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
    candidates = [(fc, c), (fd, d), (fn(lo), lo), (fn(hi), hi)]
    best_val, best_x = max(candidates)
    return best_x, best_val


def split_params(n_total: float, fraction: float) -> StateParams:
    """Pure state with ``alpha^2 = f N`` and ``sinh(r)^2 = (1 - f) N``, phase-squeezed."""
    alpha = math.sqrt(fraction * n_total)
    r = -math.asinh(math.sqrt(max(0.0, (1.0 - fraction) * n_total)))
    return StateParams(alpha=alpha, psi=0.0, r=r, chi=0.0, n_th=0.0)


def phase_information(n_total: float, fraction: float) -> float:
    return closed_form_qfi(ParamFamily("psi", split_params(n_total, fraction)))


@dataclass(frozen=True)
class PhaseOptimum:
    n_total: float
    fraction: float
    information: float

    @property
    def delta_psi(self) -> float:
        return self.information ** -0.5


def optimal_phase(n_total: float, coherent_only: bool = False, tol: float = 1e-10) -> PhaseOptimum:
    if not n_total > 0:
        raise DomainError(f"total photon number must be > 0, got {n_total}")
    if coherent_only:
        return PhaseOptimum(n_total, 1.0, phase_information(n_total, 1.0))
    f, info = golden_section_max(lambda x: phase_information(n_total, x), 0.0, 1.0, tol)
    return PhaseOptimum(n_total, f, info)


def loglog_fit(x, y) -> tuple[float, float]:
    """Least-squares slope of log y against log x and its R^2."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def phase_scaling(n_values, coherent_only: bool = False):
    """Optima for each N and the log-log slope of the minimal phase error."""
    rows = [optimal_phase(float(n), coherent_only) for n in n_values]
    slope, r2 = loglog_fit([r.n_total for r in rows], [r.delta_psi for r in rows])
    return rows, slope, r2
