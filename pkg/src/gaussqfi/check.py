"""Seeded cross-checks of closed forms against the generic engine and the oracles."""

from __future__ import annotations

import math
import time

import numpy as np

from . import fock
from .errors import DomainError
from .families import (
    FAMILY_NAMES,
    FIVE_PARAMS,
    ParamFamily,
    analytic_derivative,
    canonical_name,
    closed_form_qfi,
    coordinate_derivatives,
    off_diagonal_closed_form,
)
from .fd_oracle import qfi_from_fidelity
from .gaussian import StateParams
from .qfi import qfi_matrix, qfi_single

GENERIC_RTOL = 1e-10
ORACLE_RTOL = 1e-4
ZERO_ATOL = 1e-8

# (alpha_max, |r|_max, n_th_max)
REGIMES = {"wide": (5.0, 1.5, 5.0), "fock": (2.0, 1.0, 3.0)}
N_TH_MIN = {"wide": 0.01, "fock": 0.05}


def sample_params(rng: np.random.Generator, regime: str = "wide", n_th_min: float = 0.0) -> StateParams:
    a_max, r_max, n_max = REGIMES[regime]
    return StateParams(
        alpha=rng.uniform(0.0, a_max),
        psi=rng.uniform(-2.0 * math.pi, 2.0 * math.pi),
        r=rng.uniform(-r_max, r_max),
        chi=rng.uniform(-2.0 * math.pi, 2.0 * math.pi),
        n_th=rng.uniform(n_th_min, n_max),
    )


def sample_family(name: str, rng: np.random.Generator, regime: str = "wide") -> ParamFamily:
    name = canonical_name(name)
    a_max, r_max, _ = REGIMES[regime]
    if name == "loss_eta":
        alpha0 = rng.uniform(0.0, a_max)
        r = rng.uniform(-r_max, r_max)
        eta = rng.uniform(0.05, 0.95)
        return ParamFamily("loss_eta", StateParams(alpha=alpha0, r=r), eta)
    n_th_min = N_TH_MIN[regime] if name in ("n_th", "purity") else 0.0
    return ParamFamily(name, sample_params(rng, regime, n_th_min))


def rel_err(value: float, reference: float) -> float:
    """Relative error, or the absolute error when the reference is exactly 0."""
    if reference == 0.0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def within(value: float, reference: float, rtol: float, atol: float = ZERO_ATOL) -> bool:
    if reference == 0.0:
        return abs(value) <= atol
    return abs(value - reference) <= rtol * abs(reference)


def closed_form_matrix(base: StateParams, labels=FIVE_PARAMS) -> np.ndarray:
    """Fisher matrix assembled from the closed-form diagonal and off-diagonal elements."""
    n = len(labels)
    out = np.zeros((n, n))
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if i == j:
                out[i, i] = closed_form_qfi(ParamFamily(a, base))
            else:
                out[i, j] = off_diagonal_closed_form(a, b, base)
    return out


def matrix_error(value: np.ndarray, reference: np.ndarray) -> float:
    """Worst entrywise error of ``value`` against ``reference``.

    Non-zero reference entries use relative error. Exactly-zero entries are
    measured against ``sqrt(I_ii I_jj)``, i.e. as a normalised correlation.
    """
    diag = np.sqrt(np.abs(np.diag(reference)))
    worst = 0.0
    for i in range(reference.shape[0]):
        for j in range(reference.shape[1]):
            ref = reference[i, j]
            if ref != 0.0:
                e = abs(value[i, j] - ref) / abs(ref)
            else:
                e = abs(value[i, j]) / max(diag[i] * diag[j], 1e-300)
            worst = max(worst, float(e))
    return worst


def fock_family_qfi(f: ParamFamily, tol: float = 1e-6):
    """Truncation-converged number-basis QFI of ``f``; returns (value, n_max)."""
    start = fock.suggest_n_max(f.base)
    return fock.converged(lambda n: fock.family_qfi_fock(f, n), n_max=start, tol=tol)


def fock_params_fisher(base: StateParams, labels=FIVE_PARAMS, tol: float = 1e-6):
    """Truncation-converged number-basis Fisher matrix; returns (entries, n_max)."""
    start = fock.suggest_n_max(base)
    return fock.converged(
        lambda n: fock.params_fisher_fock(base, labels, n).entries, n_max=start, tol=tol
    )


def _rng(seed, name, stream):
    return np.random.default_rng([seed, FAMILY_NAMES.index(name), stream])


def generic_agreement(name: str, points: int = 1000, seed: int = 7, regime: str = "wide") -> dict:
    """Closed form against the generic engine on analytic derivatives."""
    name = canonical_name(name)
    rng = _rng(seed, name, 0)
    worst = 0.0
    for _ in range(points):
        f = sample_family(name, rng, regime)
        state, d = analytic_derivative(f)
        worst = max(worst, float(rel_err(qfi_single(state, d), closed_form_qfi(f))))
    return {"points": points, "max_rel": worst, "pass": bool(worst <= GENERIC_RTOL)}


def oracle_agreement(name: str, oracle: str, points: int, seed: int = 7) -> dict:
    """Closed form against the fidelity-curvature or number-basis oracle."""
    name = canonical_name(name)
    if oracle not in ("fd", "fock"):
        raise DomainError(f"unknown oracle {oracle!r}")
    regime = "fock" if oracle == "fock" else "wide"
    rng = _rng(seed, name, 1)
    worst = 0.0
    ok = True
    for _ in range(points):
        f = sample_family(name, rng, regime)
        closed = closed_form_qfi(f)
        if oracle == "fd":
            value = qfi_from_fidelity(f.state_at, f.point, f.fd_step)
        else:
            value, _ = fock_family_qfi(f)
        ok = ok and within(value, closed, ORACLE_RTOL)
        worst = max(worst, float(rel_err(value, closed)))
    return {"points": points, "max_rel": worst, "pass": bool(ok)}


def matrix_agreement(points: int, seed: int = 7) -> dict:
    """Number-basis 5x5 Fisher matrix against the closed-form matrix and the engine."""
    rng = np.random.default_rng([seed, len(FAMILY_NAMES), 2])
    worst_fock = worst_generic = 0.0
    for _ in range(points):
        base = sample_params(rng, "fock", N_TH_MIN["fock"])
        reference = closed_form_matrix(base)
        state, ds = coordinate_derivatives(base)
        generic = qfi_matrix(state, ds, FIVE_PARAMS).entries
        value, _ = fock_params_fisher(base)
        worst_fock = max(worst_fock, matrix_error(value, reference))
        worst_generic = max(worst_generic, matrix_error(generic, reference))
    return {
        "points": points,
        "max_rel": worst_fock,
        "max_rel_generic": worst_generic,
        "pass": bool(worst_fock <= ORACLE_RTOL and worst_generic <= GENERIC_RTOL),
    }


def run_check(oracle: str = "fd", families="all", seed: int = 7, points: int | None = None,
              generic_points: int = 1000) -> dict:
    """Full report: generic agreement plus oracle agreement per family."""
    if oracle not in ("fd", "fock"):
        raise DomainError(f"unknown oracle {oracle!r}")
    if families == "all":
        names = list(FAMILY_NAMES)
    else:
        names = [canonical_name(x) for x in families]
    if points is None:
        points = 100 if oracle == "fd" else 20
    start = time.perf_counter()
    report = {"oracle": oracle, "seed": seed, "families": {}}
    for name in names:
        gen = generic_agreement(name, generic_points, seed)
        orc = oracle_agreement(name, oracle, points, seed)
        report["families"][name] = {
            "generic_points": gen["points"],
            "max_rel_generic": gen["max_rel"],
            "oracle_points": orc["points"],
            "max_rel_oracle": orc["max_rel"],
            "pass": gen["pass"] and orc["pass"],
        }
    if oracle == "fock" and families == "all":
        m = matrix_agreement(points, seed)
        report["matrix5"] = m
    failing = [n for n, r in report["families"].items() if not r["pass"]]
    if "matrix5" in report and not report["matrix5"]["pass"]:
        failing.append("matrix5")
    report["failing"] = failing
    report["pass"] = not failing
    report["seconds"] = time.perf_counter() - start
    return report
