"""Quantum Fisher information of single-mode Gaussian families.

For a state with covariance ``S``, purity ``P = det(S)**-0.5`` and mean
``X``, the Fisher matrix element for parameters ``i`` and ``j`` is

    I_ij = tr(S^-1 dS_i S^-1 dS_j) / (2 (1 + P^2))
         + 2 dP_i dP_j / (1 - P^4)
         + dX_i^T S^-1 dX_j

and the single-parameter information is its diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ComputationError,
    DomainError,
    PurityBoundaryError,
    SingularCovarianceError,
    SingularFisherError,
    ZeroInformationError,
)
from .gaussian import GaussianState, det2, inv2

PURE_GAP = 1e-10
PURE_SLOPE = 1e-8
NEG_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateDerivative:
    """Derivatives of mean and covariance with respect to one parameter.

    ``d_nth`` is the derivative of the thermal photon number. Leave it as
    ``None`` when the family is not naturally expressed through ``n_th``
    (e.g. loss); the purity derivative is then taken from ``d_cov``.
    """

    d_mean: np.ndarray
    d_cov: np.ndarray
    d_nth: float | None = None

    def __post_init__(self):
        d_mean = np.array(self.d_mean, dtype=float).reshape(2)
        d_cov = np.array(self.d_cov, dtype=float).reshape(2, 2)
        if not (np.all(np.isfinite(d_mean)) and np.all(np.isfinite(d_cov))):
            raise DomainError("derivative entries must be finite")
        if abs(d_cov[0, 1] - d_cov[1, 0]) > 1e-12 * max(1.0, np.abs(d_cov).max()):
            raise DomainError("d_cov must be symmetric")
        d_cov[1, 0] = d_cov[0, 1]
        object.__setattr__(self, "d_mean", d_mean)
        object.__setattr__(self, "d_cov", d_cov)
        if self.d_nth is not None:
            object.__setattr__(self, "d_nth", float(self.d_nth))

    @classmethod
    def zero(cls) -> "StateDerivative":
        return cls(np.zeros(2), np.zeros((2, 2)), 0.0)

    def scaled(self, factor: float) -> "StateDerivative":
        """Chain rule for a scalar reparametrisation."""
        d_nth = None if self.d_nth is None else self.d_nth * factor
        return StateDerivative(self.d_mean * factor, self.d_cov * factor, d_nth)


@dataclass(frozen=True, eq=False)
class FisherMatrix:
    labels: tuple
    entries: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        m = np.array(self.entries, dtype=float)
        if m.shape != (len(labels), len(labels)):
            raise DomainError(f"entries shape {m.shape} does not match {len(labels)} labels")
        scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
        if not np.allclose(m, m.T, rtol=0, atol=1e-9 * scale):
            raise ComputationError("Fisher matrix is not symmetric")
        m = 0.5 * (m + m.T)
        if m.size and np.linalg.eigvalsh(m).min() < -PSD_TOL * scale:
            raise ComputationError("Fisher matrix is not positive semidefinite")
        m.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", m)

    def __getitem__(self, key):
        i, j = key
        if isinstance(i, str):
            i = self.labels.index(i)
        if isinstance(j, str):
            j = self.labels.index(j)
        return float(self.entries[i, j])

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "entries": self.entries.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "FisherMatrix":
        return cls(tuple(data["labels"]), np.array(data["entries"], dtype=float))


def purity_derivative(s: GaussianState, d: StateDerivative) -> float:
    """dP/dtheta.

    From ``d_nth`` when given (``P = 1/(2 n_th + 1)``), otherwise from
    ``dP = -P tr(S^-1 dS) / 2``.
    """
    p = det2(s.cov) ** -0.5
    if d.d_nth is not None:
        return -2.0 * d.d_nth * p * p
    return -0.5 * p * float(np.trace(inv2(s.cov) @ d.d_cov))


def _fisher_entries(s: GaussianState, ds: Sequence[StateDerivative]) -> np.ndarray:
    det = det2(s.cov)
    if det < 1e-12:
        raise SingularCovarianceError(f"det(cov) = {det!r}")
    icov = inv2(s.cov)
    p = det ** -0.5
    p2 = p * p
    gap = 1.0 - p2 * p2

    a = [icov @ d.d_cov for d in ds]
    dp = np.array([purity_derivative(s, d) for d in ds])
    dm = np.array([d.d_mean for d in ds]).reshape(len(ds), 2)

    if gap < PURE_GAP:
        # pure state: the purity term vanishes only if P stays stationary
        if np.any(np.abs(dp) > PURE_SLOPE):
            raise PurityBoundaryError(
                f"purity derivative {dp.max()!r} is non-zero at the pure boundary"
            )
        purity_term = np.zeros((len(ds), len(ds)))
    else:
        purity_term = 2.0 * np.outer(dp, dp) / gap

    n = len(ds)
    cov_term = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            # tr(A_i A_j) without forming the product
            cov_term[i, j] = float(np.sum(a[i] * a[j].T))
    cov_term *= 0.5 / (1.0 + p2)
    mean_term = dm @ icov @ dm.T
    return cov_term + purity_term + mean_term


def qfi_single(s: GaussianState, d: StateDerivative) -> float:
    """Quantum Fisher information for one parameter."""
    value = float(_fisher_entries(s, [d])[0, 0])
    if value < 0.0:
        if value < -NEG_TOL:
            raise ComputationError(f"negative Fisher information {value!r}")
        value = 0.0
    return value


def qfi_matrix(s: GaussianState, ds: Sequence[StateDerivative], labels=None) -> FisherMatrix:
    """Quantum Fisher matrix for several parameters.

    ``labels`` defaults to ``theta0, theta1, ...``.
    """
    ds = list(ds)
    if labels is None:
        labels = [f"theta{i}" for i in range(len(ds))]
    if len(labels) != len(ds):
        raise DomainError("need one label per derivative")
    return FisherMatrix(tuple(labels), _fisher_entries(s, ds))


def crb_single(info: float, Q: int = 1) -> float:
    """Lower bound on the estimator variance from ``Q`` repetitions."""
    if int(Q) != Q or Q < 1:
        raise DomainError(f"Q must be a positive integer, got {Q!r}")
    if info <= 1e-300:
        raise ZeroInformationError("parameter is not estimable (Fisher information is zero)")
    return 1.0 / (Q * info)


def crb_matrix(fm: FisherMatrix, Q: int = 1) -> np.ndarray:
    """Inverse Fisher matrix divided by ``Q``."""
    if int(Q) != Q or Q < 1:
        raise DomainError(f"Q must be a positive integer, got {Q!r}")
    m = fm.entries
    w, v = np.linalg.eigh(m)
    if w[-1] <= 0 or w[0] <= 1e-12 * w[-1]:
        null = v[:, 0]
        null = null * np.sign(null[np.argmax(np.abs(null))])
        terms = [
            f"{c:+.6g}*{name}" for c, name in zip(null, fm.labels) if abs(c) > 1e-8
        ]
        direction = " ".join(terms)
        raise SingularFisherError(
            f"Fisher matrix is singular along {direction}", direction=dict(zip(fm.labels, null))
        )
    inv = (v / w) @ v.T
    return 0.5 * (inv + inv.T) / Q
