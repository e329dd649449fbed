"""Randomised invariants (hypothesis)."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussqfi.families import FIVE_PARAMS, ParamFamily, analytic_derivative, coordinate_derivatives
from gaussqfi.fidelity import bures_distance, fidelity
from gaussqfi.gaussian import StateParams, from_params, is_physical
from gaussqfi.qfi import qfi_matrix, qfi_single

angle = st.floats(-2 * math.pi, 2 * math.pi)
params = st.builds(
    StateParams,
    alpha=st.floats(0, 5),
    psi=angle,
    r=st.floats(-1.5, 1.5),
    chi=angle,
    n_th=st.floats(0, 5),
)
mixed = params.filter(lambda p: p.n_th > 1e-3)


@given(params)
def test_physical(p):
    s = from_params(p)
    assert is_physical(s.cov, 1e-9)
    assert math.isclose(s.purity, 1 / (2 * p.n_th + 1), rel_tol=1e-12)


@given(params, params)
def test_fidelity_symmetric_and_bounded(p, q):
    a, b = from_params(p), from_params(q)
    f = fidelity(a, b)
    assert 0 <= f <= 1
    assert math.isclose(f, fidelity(b, a), rel_tol=1e-12, abs_tol=1e-300)
    assert 0 <= bures_distance(a, b) <= math.sqrt(2)


@given(params, st.sampled_from(["alpha", "psi", "r", "sigma2", "chi"]))
def test_qfi_nonnegative(p, name):
    state, d = analytic_derivative(ParamFamily(name, p))
    assert qfi_single(state, d) >= 0


@settings(max_examples=50)
@given(mixed)
def test_fisher_psd(p):
    state, ds = coordinate_derivatives(p, FIVE_PARAMS)
    m = qfi_matrix(state, ds, FIVE_PARAMS).entries
    w = np.linalg.eigvalsh(m)
    assert w.min() >= -1e-10 * max(1.0, w.max())
