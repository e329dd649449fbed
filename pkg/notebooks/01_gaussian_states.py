# %% [markdown]
# # Single-mode Gaussian states
#
# Quadratures are x = a + a^dag and p = i(a^dag - a), so the vacuum has identity
# covariance. A state is built as rotation * displacement * squeezing * thermal.

# %%
import numpy as np

from gaussqfi import StateParams, from_params, is_physical, wigner

p = StateParams(alpha=1.0, psi=0.3, r=0.5, chi=0.2, n_th=0.4)
s = from_params(p)
print("mean", s.mean)
print("cov\n", s.cov)
print("purity", s.purity, "expected", 1 / (2 * p.n_th + 1))

# %% [markdown]
# Squeezing and rotation are unitary, so purity only depends on n_th.

# %%
for r in (0.0, 0.5, 1.0, 1.5):
    print(r, from_params(p.replace(r=r)).purity)

# %% [markdown]
# The uncertainty relation in these units is det(cov) >= 1.

# %%
print(is_physical(np.eye(2)), is_physical(np.diag([0.5, 0.5])))

# %% [markdown]
# Wigner function on a grid; its integral is one.

# %%
x = np.linspace(-10, 10, 401)
X, P = np.meshgrid(x, x, indexing="ij")
W = wigner(s, np.stack([X, P], axis=-1))
print("peak", W.max(), "integral", np.trapezoid(np.trapezoid(W, x), x))
