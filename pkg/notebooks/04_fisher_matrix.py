# %% [markdown]
# # Five-parameter Fisher matrix
#
# Only the (chi, psi) and (alpha, psi) entries are off-diagonal, and the latter
# vanishes when chi = 0.

# %%
import numpy as np

from gaussqfi import FIVE_PARAMS, StateParams, crb_matrix, qfi_matrix
from gaussqfi.families import coordinate_derivatives

np.set_printoptions(precision=5, suppress=True)
base = StateParams(alpha=1.0, psi=0.3, r=0.5, chi=0.7, n_th=0.5)
state, ds = coordinate_derivatives(base, FIVE_PARAMS)
fm = qfi_matrix(state, ds, FIVE_PARAMS)
print(fm.labels)
print(fm.entries)

# %% [markdown]
# psi and chi both rotate the squeezing ellipse, so with alpha = 0 they cannot
# be told apart and the matrix bound does not exist.

# %%
from gaussqfi.errors import SingularFisherError

state, ds = coordinate_derivatives(base.replace(alpha=0.0), ("psi", "chi"))
try:
    crb_matrix(qfi_matrix(state, ds, ("psi", "chi")))
except SingularFisherError as exc:
    print(exc)

# %%
state, ds = coordinate_derivatives(base, ("alpha", "psi"))
print(crb_matrix(qfi_matrix(state, ds, ("alpha", "psi")), Q=10))
