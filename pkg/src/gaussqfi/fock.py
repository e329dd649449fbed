"""Truncated number-basis ground truth.

States are built from the operators themselves,

    rho = R(psi) D(alpha) S(r, chi) nu(n_th) S^dag D^dag R^dag,

with ``R = exp(i psi n)``, ``D = exp(alpha a^dag - alpha a)`` and
``S = exp((zeta^* a^2 - zeta a^dag^2) / 2)``, ``zeta = r exp(2 i chi)``. The
doubled angle is what makes the squeezed quadrature point along ``chi``, the
orientation of the Gaussian covariance matrix used elsewhere in the package.

Both generators are real antisymmetric and tridiagonal (the squeezing one
within each photon-number parity sector), so their exponentials are taken
through a symmetric tridiagonal eigendecomposition instead of dense
scaling-and-squaring. Operators live in a padded space of dimension
``n_max + 1 + pad`` and the state is projected onto the first ``n_max + 1``
levels; the discarded probability is reported as ``tail_mass``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import ComputationError, DomainError, TruncationError
from .families import ParamFamily, canonical_name
from .gaussian import StateParams
from .qfi import FisherMatrix

DEFAULT_N_MAX = 80
HARD_CAP = 800
TAIL_CAP = 1e-10
SLD_CUT = 1e-12
FIDELITY_CUT = 1e-14


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    entries: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DomainError("density matrix must be square")
        scale = max(1e-300, float(np.abs(rho).max()))
        if np.abs(rho - rho.conj().T).max() > 1e-12 * scale:
            raise DomainError("density matrix is not Hermitian")
        trace = np.trace(rho).real
        if abs(trace - 1.0) > 1e-10:
            raise DomainError(f"density matrix has trace {trace!r}")
        rho = 0.5 * (rho + rho.conj().T)
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_max(self) -> int:
        return self.dim - 1


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """x and p on the first ``dim`` levels (products exact up to level dim - 2)."""
    a = annihilation(dim)
    return a + a.T, 1j * (a.T - a)


def expm_antisym_tridiagonal(lower: np.ndarray) -> np.ndarray:
    """exp(G) for real G with G[j+1, j] = lower[j] = -G[j, j+1], zero diagonal.

    With ``T = diag(i^j)`` one has ``T^dag G T = -i H`` where ``H`` is real
    symmetric tridiagonal with off-diagonal ``lower``.
    """
    n = len(lower) + 1
    if n == 1:
        return np.ones((1, 1))
    lam, v = scipy.linalg.eigh_tridiagonal(np.zeros(n), np.asarray(lower, dtype=float))
    phase = 1j ** np.arange(n)
    left = (phase[:, None] * v) * np.exp(-1j * lam)[None, :]
    return (left @ (v.T * phase.conj()[None, :])).real


@functools.lru_cache(maxsize=8)
def displacement_matrix(alpha: float, dim: int) -> np.ndarray:
    """exp(alpha (a^dag - a)) for real ``alpha`` in a ``dim``-level space."""
    return expm_antisym_tridiagonal(alpha * np.sqrt(np.arange(1, dim, dtype=float)))


@functools.lru_cache(maxsize=8)
def squeeze_real_matrix(r: float, dim: int) -> np.ndarray:
    """exp(r (a^2 - a^dag^2) / 2) in a ``dim``-level space."""
    out = np.zeros((dim, dim))
    for parity in (0, 1):
        levels = np.arange(parity, dim, 2)
        if len(levels) == 0:
            continue
        n = levels[:-1].astype(float)
        # <n+2| G |n> = -r sqrt((n+1)(n+2)) / 2
        block = expm_antisym_tridiagonal(-0.5 * r * np.sqrt((n + 1.0) * (n + 2.0)))
        out[np.ix_(levels, levels)] = block
    return out


def squeeze_matrix(r: float, chi: float, dim: int) -> np.ndarray:
    """exp((zeta^* a^2 - zeta a^dag^2) / 2) with ``zeta = r exp(2 i chi)``."""
    ph = np.exp(1j * chi * np.arange(dim))
    return ph[:, None] * squeeze_real_matrix(r, dim) * ph.conj()[None, :]


def thermal_weights(n_th: float, count: int) -> np.ndarray:
    k = np.arange(count, dtype=float)
    if n_th == 0.0:
        w = np.zeros(count)
        w[0] = 1.0
        return w
    return np.exp(k * math.log(n_th / (n_th + 1.0)) - math.log(n_th + 1.0))


def default_pad(n_max: int) -> int:
    return max(40, n_max // 2)


def _rho(alpha, psi, r, chi, n_th, n_max, pad=None, cap=TAIL_CAP):
    if n_th < 0:
        raise DomainError("n_th must be >= 0")
    if pad is None:
        pad = default_pad(n_max)
    dim = n_max + 1
    big = dim + pad
    p = thermal_weights(n_th, dim)
    keep = p > 1e-18 * p[0]
    p = p[keep]
    cols = np.flatnonzero(keep)

    ph_chi = np.exp(1j * chi * np.arange(big))
    s_cols = ph_chi[:, None] * squeeze_real_matrix(r, big)[:, cols] * ph_chi[cols].conj()[None, :]
    u_cols = displacement_matrix(alpha, big) @ s_cols
    w = np.exp(1j * psi * np.arange(dim))[:, None] * u_cols[:dim]

    rho = (w * p[None, :]) @ w.conj().T
    trace = float(np.trace(rho).real)
    tail = 1.0 - trace
    if tail > cap:
        raise TruncationError(f"tail mass {tail:.3e} exceeds {cap:.1e} at n_max={n_max}")
    return rho / trace, max(tail, 0.0)


def suggest_n_max(p: StateParams, cap: float = TAIL_CAP, step: int = 20) -> int:
    """Truncation expected to hold all but ``cap`` of the photon distribution.

    Heuristic: the photon-number tail of a Gaussian state decays at least as
    fast as ``q^n`` with ``q = (l - 1) / (l + 1)`` for the largest covariance
    eigenvalue ``l``; the displacement adds a Poisson-like shoulder. Rounded
    up to a multiple of ``step``.
    """
    k = 2.0 * p.n_th + 1.0
    lam = k * math.exp(2.0 * abs(p.r))
    n = 10.0 + p.alpha**2 + 10.0 * p.alpha
    if lam > 1.0 + 1e-12:
        q = (lam - 1.0) / (lam + 1.0)
        n += math.log(cap) / math.log(q)
    n = max(n, 20.0)
    return int(min(step * math.ceil(n / step), HARD_CAP - step))


def build_state(p: StateParams, n_max: int = DEFAULT_N_MAX, pad=None, cap=TAIL_CAP) -> FockDensityMatrix:
    """Density matrix of ``p`` on levels ``0..n_max``."""
    if n_max < 8:
        raise DomainError("n_max must be >= 8")
    rho, tail = _rho(p.alpha, p.psi, p.r, p.chi, p.n_th, n_max, pad, cap)
    return FockDensityMatrix(rho, tail)


def apply_loss_fock(rho: np.ndarray, eta: float) -> np.ndarray:
    """Pure-loss channel of transmissivity ``1 - eta`` via its Kraus operators.

    ``K_k |n> = sqrt(C(n, k) (1 - eta)^(n - k) eta^k) |n - k>``.
    """
    if not (0.0 <= eta < 1.0):
        raise DomainError("eta must lie in [0, 1)")
    rho = np.asarray(rho)
    dim = rho.shape[0]
    if eta == 0.0:
        return rho.copy()
    n = np.arange(dim, dtype=float)
    out = np.zeros_like(rho, dtype=complex)
    log_t, log_e = math.log1p(-eta), math.log(eta)
    for k in range(dim):
        m = n[k:]
        logc = 0.5 * (gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
                      + (m - k) * log_t + k * log_e)
        c = np.exp(logc)
        out[: dim - k, : dim - k] += np.outer(c, c) * rho[k:, k:]
    return out


def _sqrt_factor(rho: np.ndarray, cut: float):
    lam, v = np.linalg.eigh(rho)
    if lam[0] < -1e-10:
        raise ComputationError(f"density matrix has eigenvalue {lam[0]!r}")
    keep = lam > cut * lam[-1]
    return np.sqrt(lam[keep]), v[:, keep]


def uhlmann_fidelity(r1: FockDensityMatrix, r2: FockDensityMatrix, cut: float = FIDELITY_CUT) -> float:
    """``(tr sqrt(sqrt(r1) r2 sqrt(r1)))^2`` through the nuclear norm of sqrt(r1) sqrt(r2).

    Eigenvalues below ``cut * max`` are treated as zero so that rounding noise
    in the null space does not accumulate through the square roots.
    """
    if r1.dim != r2.dim:
        raise DomainError("density matrices must share the truncation")
    s1, v1 = _sqrt_factor(r1.entries, cut)
    s2, v2 = _sqrt_factor(r2.entries, cut)
    core = s1[:, None] * (v1.conj().T @ v2) * s2[None, :]
    f = float(np.sum(np.linalg.svd(core, compute_uv=False)) ** 2)
    if f > 1.0 + 1e-9:
        raise ComputationError(f"Uhlmann fidelity {f!r} exceeds 1")
    return min(f, 1.0)


def _eigen(rho):
    lam, v = np.linalg.eigh(np.asarray(rho))
    if lam[0] < -1e-10:
        raise ComputationError(f"density matrix has eigenvalue {lam[0]!r}")
    return lam, v


def _sld_eigenbasis(lam, v, drho, cut):
    d = v.conj().T @ drho @ v
    denom = lam[:, None] + lam[None, :]
    mask = denom > cut * lam[-1]
    return d, np.where(mask, 2.0 * d / np.where(mask, denom, 1.0), 0.0)


def sld(rho, drho, cut: float = SLD_CUT) -> np.ndarray:
    """Symmetric logarithmic derivative ``L`` with ``drho = (rho L + L rho) / 2``.

    Pairs of eigenvalues with ``rho_n + rho_m <= cut * max(rho)`` are dropped.
    """
    if isinstance(rho, FockDensityMatrix):
        rho = rho.entries
    lam, v = _eigen(rho)
    _, l_eig = _sld_eigenbasis(lam, v, np.asarray(drho), cut)
    out = v @ l_eig @ v.conj().T
    return 0.5 * (out + out.conj().T)


def fisher_matrix_fock(rho, drhos: Sequence[np.ndarray], labels=None, cut: float = SLD_CUT) -> FisherMatrix:
    """Fisher matrix ``I_ij = tr(d_i rho L_j)`` from symmetric logarithmic derivatives.

    Cross-checked against ``tr(rho (L_i L_j + L_j L_i)) / 2``.
    """
    if isinstance(rho, FockDensityMatrix):
        rho = rho.entries
    if labels is None:
        labels = [f"theta{i}" for i in range(len(drhos))]
    lam, v = _eigen(rho)
    pieces = [_sld_eigenbasis(lam, v, np.asarray(d), cut) for d in drhos]
    n = len(pieces)
    direct = np.empty((n, n))
    anti = np.empty((n, n))
    weight = 0.5 * (lam[:, None] + lam[None, :])
    for i, (di, li) in enumerate(pieces):
        for j, (dj, lj) in enumerate(pieces):
            direct[i, j] = np.sum(di * lj.T).real
            anti[i, j] = np.sum(weight * li * lj.T).real
    scale = max(1.0, float(np.abs(direct).max()))
    if np.abs(direct - anti).max() > 1e-8 * scale:
        raise ComputationError("the two SLD forms of the Fisher matrix disagree")
    return FisherMatrix(tuple(labels), 0.5 * (direct + direct.T))


# Families in the number basis -------------------------------------------------

def family_rho(f: ParamFamily, theta: float, n_max: int, pad=None, cap=TAIL_CAP) -> np.ndarray:
    """Density matrix of family ``f`` at coordinate ``theta``."""
    if f.name == "loss_eta":
        b = f.base
        rho0, _ = _rho(b.alpha, 0.0, b.r, 0.0, 0.0, n_max, pad, cap)
        return apply_loss_fock(rho0, theta)
    rho, _ = _rho(*f.values_at(theta), n_max, pad, cap)
    return rho


def fock_step(f: ParamFamily) -> float:
    return 0.1 * f.fd_step


def _central(fn: Callable[[float], np.ndarray], theta: float, h: float) -> np.ndarray:
    return (fn(theta + h) - fn(theta - h)) / (2.0 * h)


def family_qfi_fock(f: ParamFamily, n_max: int = DEFAULT_N_MAX, h=None, pad=None, cap=TAIL_CAP) -> float:
    """Single-parameter QFI of ``f`` in the number basis at fixed truncation."""
    h = fock_step(f) if h is None else h
    fn = lambda t: family_rho(f, t, n_max, pad, cap)
    fm = fisher_matrix_fock(fn(f.point), [_central(fn, f.point, h)], [f.name])
    return fm.entries[0, 0]


def params_fisher_fock(base: StateParams, labels=("alpha", "psi", "r", "chi", "n_th"),
                       n_max: int = DEFAULT_N_MAX, h: float = 1e-4, pad=None, cap=TAIL_CAP) -> FisherMatrix:
    """Fisher matrix over decomposition coordinates by central differences of rho."""
    labels = tuple(canonical_name(x) for x in labels)
    names = ("alpha", "psi", "r", "chi", "n_th")
    if any(x not in names for x in labels):
        raise DomainError(f"labels must be drawn from {names}")
    x0 = np.array([base.alpha, base.psi, base.r, base.chi, base.n_th])

    def at(vec):
        return _rho(*vec, n_max, pad, cap)[0]

    drhos = []
    for name in labels:
        e = np.zeros(5)
        e[names.index(name)] = h
        drhos.append((at(x0 + e) - at(x0 - e)) / (2.0 * h))
    return fisher_matrix_fock(at(x0), drhos, labels)


def converged(fn: Callable[[int], object], n_max: int = DEFAULT_N_MAX, step: int = 20,
              tol: float = 1e-6, hard_cap: int = HARD_CAP):
    """Evaluate ``fn(n)`` until it agrees with ``fn(n + step)``.

    ``n`` starts at ``n_max`` and doubles on disagreement or truncation
    failure. Agreement means ``max|v(n) - v(n+step)| <= tol * max(1, |v|)``.
    Returns ``(value at n + step, n + step)``.
    """
    n = n_max
    last_error = None
    while True:
        try:
            a = np.asarray(fn(n), dtype=float)
            b = np.asarray(fn(n + step), dtype=float)
        except TruncationError as exc:
            last_error = exc
        else:
            scale = max(1.0, float(np.abs(b).max()))
            if float(np.abs(a - b).max()) <= tol * scale:
                return (float(b) if b.ndim == 0 else b), n + step
            last_error = None
        if n + step >= hard_cap:
            break
        n = min(2 * n, hard_cap - step)
    raise TruncationError(
        f"no convergence below n_max={hard_cap}" + (f": {last_error}" if last_error else "")
    )
