"""Named one-parameter families, their exact derivatives and closed-form QFIs.

Each family varies one coordinate of the R D S nu decomposition (or the loss
parameter of an attenuated amplitude-squeezed state) while holding the rest
of ``base`` fixed:

=========  ==========================  ===================================
name       coordinate                  closed form
=========  ==========================  ===================================
alpha      displacement amplitude      4 P0 (cos^2 chi / s^2 + s^2 sin^2 chi)
psi        rotation phase              4 P0 a^2 (s^2 cos^2 chi + sin^2 chi / s^2)
                                       + (1 - s^4)^2 / ((1 + P0^2) s^4)
sigma2     s^2 = exp(-2 r)             1 / ((1 + P0^2) s^4)
r          squeezing magnitude         4 / (1 + P0^2)
chi        squeezing direction         (1 - s^4)^2 / ((1 + P0^2) s^4)
n_th       thermal photons             1 / (n_th + n_th^2)
purity     P0 = 1 / (2 n_th + 1)       1 / (P0^2 - P0^4)
loss_eta   attenuation eta             see :func:`loss_qfi`
=========  ==========================  ===================================

with ``s = sigma = exp(-r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .gaussian import GaussianState, StateParams, apply_loss, from_params, state_from_values
from .qfi import StateDerivative

FAMILY_NAMES = ("alpha", "psi", "sigma2", "r", "chi", "n_th", "purity", "loss_eta")
FIVE_PARAMS = ("alpha", "psi", "r", "chi", "n_th")
ALIASES = {"nth": "n_th", "eta": "loss_eta", "loss": "loss_eta", "sigma^2": "sigma2", "P": "purity"}


def canonical_name(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in FAMILY_NAMES:
        raise DomainError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")
    return name


def coordinate_derivative(alpha, psi, r, chi, n_th, wrt: str) -> StateDerivative:
    """Exact derivative of (mean, cov) with respect to one coordinate.

    ``wrt`` is one of ``alpha, psi, r, sigma2, chi, n_th, purity``.
    """
    angle = chi + psi
    s2 = math.exp(-2.0 * r)
    c, s = math.cos(angle), math.sin(angle)
    c2, s2a = math.cos(2.0 * angle), math.sin(2.0 * angle)
    k = 2.0 * n_th + 1.0
    zero_cov = np.zeros((2, 2))

    if wrt == "alpha":
        # mean = 2 alpha (cos psi, sin psi)
        return StateDerivative([2.0 * math.cos(psi), 2.0 * math.sin(psi)], zero_cov, 0.0)

    if wrt in ("psi", "chi"):
        # cov depends on chi + psi only; d/d(angle) of
        #   xx = k (s2 c^2 + s^2/s2), xp = k/2 (s2 - 1/s2) sin 2a, pp = k (c^2/s2 + s2 s^2)
        dxx = k * (1.0 / s2 - s2) * s2a
        dxp = k * (s2 - 1.0 / s2) * c2
        dpp = k * (s2 - 1.0 / s2) * s2a
        d_cov = [[dxx, dxp], [dxp, dpp]]
        if wrt == "chi":
            return StateDerivative([0.0, 0.0], d_cov, 0.0)
        # rotation also turns the mean
        d_mean = [-2.0 * alpha * math.sin(psi), 2.0 * alpha * math.cos(psi)]
        return StateDerivative(d_mean, d_cov, 0.0)

    if wrt in ("sigma2", "r"):
        # d/d(s2) of xx = k (s2 c^2 + s^2 / s2) etc.
        dxx = k * (c * c - s * s / (s2 * s2))
        dxp = k * 0.5 * (1.0 + 1.0 / (s2 * s2)) * s2a
        dpp = k * (s * s - c * c / (s2 * s2))
        d_cov = np.array([[dxx, dxp], [dxp, dpp]])
        if wrt == "r":
            # ds2/dr = -2 s2
            d_cov = -2.0 * s2 * d_cov
        return StateDerivative([0.0, 0.0], d_cov, 0.0)

    if wrt in ("n_th", "purity"):
        # cov is linear in k = 2 n_th + 1
        unit = state_from_values(0.0, psi, r, chi, 0.0).cov
        if wrt == "n_th":
            return StateDerivative([0.0, 0.0], 2.0 * unit, 1.0)
        # n_th = (1/P - 1) / 2, dn/dP = -1 / (2 P^2) = -k^2 / 2
        return StateDerivative([0.0, 0.0], -k * k * unit, -0.5 * k * k)

    raise DomainError(f"no coordinate {wrt!r}")


@dataclass(frozen=True)
class ParamFamily:
    """A named one-parameter family through ``base``.

    ``point`` is the value of the varied coordinate; it defaults to the value
    implied by ``base``. For ``loss_eta`` the base supplies the input
    amplitude ``alpha0 = base.alpha`` and ``sigma = base.sigma`` (with
    ``psi = chi = n_th = 0``) and ``point`` is the attenuation ``eta``.
    """

    name: str
    base: StateParams = field(default_factory=StateParams)
    point: float | None = None

    def __post_init__(self):
        name = canonical_name(self.name)
        object.__setattr__(self, "name", name)
        if self.point is None:
            if name == "loss_eta":
                raise DomainError("loss_eta family needs an explicit eta point")
            object.__setattr__(self, "point", self._coordinate(self.base))
        else:
            object.__setattr__(self, "point", float(self.point))
        _check_domain(self)

    @staticmethod
    def loss(alpha0: float, sigma: float, eta: float) -> "ParamFamily":
        return ParamFamily("loss_eta", StateParams.from_sigma(alpha=alpha0, sigma=sigma), eta)

    def _coordinate(self, p: StateParams) -> float:
        return {
            "alpha": p.alpha,
            "psi": p.psi,
            "sigma2": p.sigma2,
            "r": p.r,
            "chi": p.chi,
            "n_th": p.n_th,
            "purity": p.purity,
        }[self.name]

    @property
    def theta(self) -> float:
        return self.point

    def values_at(self, theta: float) -> tuple:
        """(alpha, psi, r, chi, n_th) with the family coordinate set to ``theta``."""
        if self.name == "loss_eta":
            raise DomainError("loss_eta is not a point of the R D S nu decomposition")
        b = self.base
        v = dict(alpha=b.alpha, psi=b.psi, r=b.r, chi=b.chi, n_th=b.n_th)
        if self.name == "sigma2":
            v["r"] = -0.5 * math.log(theta)
        elif self.name == "purity":
            v["n_th"] = 0.5 * (1.0 / theta - 1.0)
        else:
            v[self.name] = theta
        return v["alpha"], v["psi"], v["r"], v["chi"], v["n_th"]

    def state_at(self, theta: float) -> GaussianState:
        if self.name == "loss_eta":
            s0 = from_params(self.base)
            return apply_loss(s0, theta)
        return state_from_values(*self.values_at(theta))

    def state(self) -> GaussianState:
        return self.state_at(self.point)

    @property
    def fd_step(self) -> float:
        """Finite-difference step suited to the family's natural scale."""
        t = self.point
        if self.name == "sigma2":
            return 1e-3 * t
        if self.name == "n_th":
            return 1e-3 * min(1.0, t)
        if self.name in ("purity", "loss_eta"):
            return 1e-3 * min(t, 1.0 - t) if t > 0 else 1e-3
        return 1e-3 * max(1.0, abs(t))


def _check_domain(f: ParamFamily):
    t = f.point
    if not math.isfinite(t):
        raise DomainError(f"{f.name}: point must be finite")
    if f.name == "sigma2" and t <= 0:
        raise DomainError("sigma2 must be > 0")
    if f.name == "n_th" and t <= 0:
        # 1/(n + n^2) diverges at the pure boundary
        raise DomainError("n_th family requires n_th > 0")
    if f.name == "purity" and not (0.0 < t < 1.0):
        raise DomainError("purity family requires 0 < P < 1")
    if f.name == "alpha" and t < 0:
        raise DomainError("alpha must be >= 0")
    if f.name == "loss_eta":
        b = f.base
        if b.psi != 0 or b.chi != 0 or b.n_th != 0:
            raise DomainError("loss_eta base must have psi = chi = n_th = 0")
        if not (0.0 <= t < 1.0):
            raise DomainError("eta must lie in (0, 1)")
        if t == 0.0 and b.r != 0.0:
            # the closed form has a 1/eta pole unless sigma = 1
            raise DomainError("eta = 0 is only admissible for sigma = 1")


def analytic_derivative(f: ParamFamily) -> tuple[GaussianState, StateDerivative]:
    """State at the family point and its exact derivative."""
    if f.name == "loss_eta":
        eta = f.point
        s2 = f.base.sigma2
        a0 = f.base.alpha
        state = f.state()
        # mean_x = 2 a0 sqrt(1 - eta); cov entries are affine in eta
        d_mean = [-a0 / math.sqrt(1.0 - eta), 0.0]
        d_cov = np.diag([1.0 - s2, 1.0 - 1.0 / s2])
        return state, StateDerivative(d_mean, d_cov, None)
    values = f.values_at(f.point)
    return state_from_values(*values), coordinate_derivative(*values, wrt=f.name)


def loss_qfi(alpha0: float, sigma: float, eta: float) -> float:
    """QFI for the attenuation ``eta`` of an amplitude-squeezed state."""
    s2 = sigma * sigma
    first = alpha0**2 / (s2 + eta * (1 - s2))
    if (1 - s2) == 0:
        second = 0.0
    else:
        second = (1 - 2 * eta * (1 - eta)) * (1 - s2) ** 2 / (
            2 * eta * (2 * s2 + eta * (1 - eta) * (1 - s2) ** 2)
        )
    return 1 / (1 - eta) * (first + second)


def closed_form_qfi(f: ParamFamily) -> float:
    b = f.base
    if f.name == "loss_eta":
        return loss_qfi(b.alpha, b.sigma, f.point)

    alpha, psi, r, chi, n_th = f.values_at(f.point)
    p0 = 1.0 / (2.0 * n_th + 1.0)
    s2 = math.exp(-2.0 * r)
    s4 = s2 * s2
    one_minus_s4 = -math.expm1(-4.0 * r)
    cos2, sin2 = math.cos(chi) ** 2, math.sin(chi) ** 2
    squeeze_term = one_minus_s4**2 / ((1.0 + p0 * p0) * s4)

    if f.name == "alpha":
        return 4.0 * p0 * (cos2 / s2 + s2 * sin2)
    if f.name == "psi":
        return 4.0 * p0 * alpha**2 * (s2 * cos2 + sin2 / s2) + squeeze_term
    if f.name == "sigma2":
        return 1.0 / ((1.0 + p0 * p0) * s4)
    if f.name == "r":
        return 4.0 / (1.0 + p0 * p0)
    if f.name == "chi":
        return squeeze_term
    if f.name == "n_th":
        return 1.0 / (n_th + n_th * n_th)
    if f.name == "purity":
        return 1.0 / (p0**2 - p0**4)
    raise DomainError(f.name)


def off_diagonal_closed_form(i: str, j: str, base: StateParams) -> float:
    """Closed-form off-diagonal Fisher element among the decomposition coordinates.

    Only (chi, psi) and (alpha, psi) are non-zero.
    """
    i, j = canonical_name(i), canonical_name(j)
    allowed = ("alpha", "psi", "sigma2", "r", "chi", "n_th")
    if i not in allowed or j not in allowed:
        raise DomainError("off-diagonal elements are defined for the decomposition coordinates")
    if i == j:
        raise DomainError("i and j must differ")
    pair = {i, j}
    if pair == {"chi", "psi"}:
        return closed_form_qfi(ParamFamily("chi", base))
    if pair == {"alpha", "psi"}:
        s2 = base.sigma2
        return 2.0 * base.purity * base.alpha * (1.0 / s2 - s2) * math.sin(2.0 * base.chi)
    return 0.0


def coordinate_derivatives(base: StateParams, labels=FIVE_PARAMS):
    """State at ``base`` and the derivative for each coordinate in ``labels``."""
    values = (base.alpha, base.psi, base.r, base.chi, base.n_th)
    ds = [coordinate_derivative(*values, wrt=canonical_name(name)) for name in labels]
    return from_params(base), ds


# Loss expressed through an angle: 1 - eta = cos^2(phi).

def eta_from_phi(phi: float) -> float:
    return math.sin(phi) ** 2


def loss_phi_derivative(alpha0: float, sigma: float, phi: float):
    """State and derivative of the loss family in the ``phi`` coordinate."""
    f = ParamFamily.loss(alpha0, sigma, eta_from_phi(phi))
    state, d = analytic_derivative(f)
    return state, d.scaled(math.sin(2.0 * phi))


def loss_phi_qfi(alpha0: float, sigma: float, phi: float) -> float:
    """``I_eta * (d eta / d phi)^2`` with ``d eta / d phi = sin(2 phi)``."""
    return loss_qfi(alpha0, sigma, eta_from_phi(phi)) * math.sin(2.0 * phi) ** 2
