"""Single-mode Gaussian states in the x/p quadrature picture.

Units: hbar = 2 throughout, i.e. ``x = a + a^dag`` and ``p = i(a^dag - a)``,
so the vacuum has the identity as covariance matrix and purity is
``det(cov) ** -0.5``.

A general state is parameterised as a rotated, displaced, squeezed thermal
state ``R(psi) D(alpha) S(r, chi) nu(n_th) S^dag D^dag R^dag`` with

* ``alpha >= 0``  displacement amplitude along x before rotation,
* ``psi``         rotation phase,
* ``r``           squeezing magnitude, ``sigma = exp(-r)``,
* ``chi``         squeezing direction,
* ``n_th >= 0``   thermal photon number of the core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TOL_PHYS = 1e-9
TOL_PURE = 1e-9

STATE_KEYS = ("mean_x", "mean_p", "cov_xx", "cov_xp", "cov_pp")
PARAM_KEYS = ("alpha", "psi", "r", "chi", "n_th")


def det2(m) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def inv2(m) -> np.ndarray:
    """Inverse of a 2x2 matrix through the adjugate."""
    d = det2(m)
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / d


def is_physical(cov, tol: float = TOL_PHYS) -> bool:
    """True iff ``cov`` is positive definite and obeys the uncertainty bound.

    In hbar = 2 units the Robertson-Schroedinger relation for one mode reads
    ``det(cov) >= 1``.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2) or not np.all(np.isfinite(cov)):
        return False
    if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * max(1.0, np.abs(cov).max()):
        return False
    if cov[0, 0] <= 0 or cov[1, 1] <= 0:
        return False
    d = det2(cov)
    return d > 0 and d >= 1.0 - tol


@dataclass(frozen=True)
class StateParams:
    """Physical parameters of the R D S nu decomposition."""

    alpha: float = 0.0
    psi: float = 0.0
    r: float = 0.0
    chi: float = 0.0
    n_th: float = 0.0

    def __post_init__(self):
        for key in PARAM_KEYS:
            value = getattr(self, key)
            if not math.isfinite(value):
                raise DomainError(f"{key} must be finite, got {value!r}")
            object.__setattr__(self, key, float(value))
        if self.alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")
        if self.n_th < 0:
            raise DomainError(f"n_th must be >= 0, got {self.n_th}")

    @classmethod
    def from_sigma(cls, alpha=0.0, psi=0.0, sigma=1.0, chi=0.0, n_th=0.0):
        if not sigma > 0:
            raise DomainError(f"sigma must be > 0, got {sigma}")
        return cls(alpha, psi, -math.log(sigma), chi, n_th)

    @property
    def sigma(self) -> float:
        return math.exp(-self.r)

    @property
    def sigma2(self) -> float:
        return math.exp(-2.0 * self.r)

    @property
    def purity(self) -> float:
        return 1.0 / (2.0 * self.n_th + 1.0)

    def replace(self, **changes) -> "StateParams":
        values = self.to_dict()
        values.update(changes)
        return StateParams(**values)

    def to_dict(self) -> dict:
        return {key: getattr(self, key) for key in PARAM_KEYS}

    @classmethod
    def from_dict(cls, data: dict) -> "StateParams":
        unknown = set(data) - set(PARAM_KEYS)
        if unknown:
            raise DomainError(f"unknown parameter keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean quadrature vector and covariance matrix of a single mode.

    Construction validates physicality; both arrays are stored read-only.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise DomainError("state entries must be finite")
        if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * max(1.0, np.abs(cov).max()):
            raise DomainError("covariance matrix must be symmetric")
        cov[1, 0] = cov[0, 1]
        if not is_physical(cov, TOL_PHYS):
            raise DomainError(
                f"covariance violates the uncertainty principle: det={det2(cov)!r}"
            )
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def det(self) -> float:
        return det2(self.cov)

    @property
    def purity(self) -> float:
        return purity(self)

    def to_dict(self) -> dict:
        return {
            "mean_x": float(self.mean[0]),
            "mean_p": float(self.mean[1]),
            "cov_xx": float(self.cov[0, 0]),
            "cov_xp": float(self.cov[0, 1]),
            "cov_pp": float(self.cov[1, 1]),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianState":
        missing = set(STATE_KEYS) - set(data)
        if missing:
            raise DomainError(f"missing state keys: {sorted(missing)}")
        return cls(
            mean=[data["mean_x"], data["mean_p"]],
            cov=[[data["cov_xx"], data["cov_xp"]], [data["cov_xp"], data["cov_pp"]]],
        )

    def allclose(self, other: "GaussianState", rtol=1e-14, atol=1e-14) -> bool:
        return bool(
            np.allclose(self.mean, other.mean, rtol=rtol, atol=atol)
            and np.allclose(self.cov, other.cov, rtol=rtol, atol=atol)
        )


def _mean_and_cov(alpha, psi, r, chi, n_th):
    # No sign checks: finite-difference stencils may step to alpha < 0.
    angle = chi + psi
    s2 = math.exp(-2.0 * r)
    c, s = math.cos(angle), math.sin(angle)
    k = 2.0 * n_th + 1.0
    xx = k * (s2 * c * c + s * s / s2)
    pp = k * (c * c / s2 + s2 * s * s)
    xp = k * 0.5 * (s2 - 1.0 / s2) * math.sin(2.0 * angle)
    mean = (2.0 * alpha * math.cos(psi), 2.0 * alpha * math.sin(psi))
    return mean, ((xx, xp), (xp, pp))


def state_from_values(alpha, psi, r, chi, n_th) -> GaussianState:
    """Like :func:`from_params` but without the ``alpha >= 0`` restriction."""
    mean, cov = _mean_and_cov(alpha, psi, r, chi, n_th)
    return GaussianState(mean, cov)


def from_params(p: StateParams) -> GaussianState:
    return state_from_values(p.alpha, p.psi, p.r, p.chi, p.n_th)


def purity(s: GaussianState) -> float:
    return det2(s.cov) ** -0.5


def wigner(s: GaussianState, point) -> np.ndarray | float:
    """Wigner function of ``s`` at ``point``.

    ``point`` is an ``(x, p)`` pair or any array whose last axis has length 2;
    the result has the leading shape of ``point``.
    """
    pts = np.asarray(point, dtype=float)
    if pts.shape[-1] != 2:
        raise DomainError("point must have a trailing axis of length 2")
    d = pts - s.mean
    icov = inv2(s.cov)
    quad = np.einsum("...i,ij,...j->...", d, icov, d)
    w = np.exp(-0.5 * quad) / (2.0 * np.pi * math.sqrt(s.det))
    return float(w) if w.ndim == 0 else w


def apply_loss(s0: GaussianState, eta: float) -> GaussianState:
    """Attenuate an amplitude-squeezed, real-amplitude pure state.

    Input must have mean ``(2 alpha0, 0)`` and covariance
    ``diag(sigma^2, 1/sigma^2)``; the output is
    ``mean * sqrt(1 - eta)`` and
    ``diag(sigma^2 + eta (1 - sigma^2), 1/sigma^2 + eta (1 - 1/sigma^2))``.
    Use :func:`apply_loss_general` for arbitrary inputs.
    """
    if not (0.0 <= eta < 1.0):
        raise DomainError(f"eta must lie in [0, 1), got {eta}")
    cov = s0.cov
    scale = max(1.0, float(np.abs(cov).max()))
    if abs(cov[0, 1]) > 1e-12 * scale or abs(s0.mean[1]) > 1e-12 * max(1.0, abs(s0.mean[0])):
        raise DomainError("apply_loss expects psi = chi = 0 (diagonal covariance, real amplitude)")
    if abs(s0.det - 1.0) > 1e-9:
        raise DomainError("apply_loss expects a pure input; see apply_loss_general")
    s2 = cov[0, 0]
    new_cov = np.diag([s2 + eta * (1.0 - s2), 1.0 / s2 + eta * (1.0 - 1.0 / s2)])
    return GaussianState(math.sqrt(1.0 - eta) * s0.mean, new_cov)


def apply_loss_general(s: GaussianState, eta: float) -> GaussianState:
    """Pure-loss channel with transmissivity ``1 - eta`` on any state.

    ``cov -> (1 - eta) cov + eta * I`` and ``mean -> sqrt(1 - eta) mean``.
    Coincides with :func:`apply_loss` on its restricted input family.
    """
    if not (0.0 <= eta <= 1.0):
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    return GaussianState(
        math.sqrt(1.0 - eta) * s.mean, (1.0 - eta) * s.cov + eta * np.eye(2)
    )
