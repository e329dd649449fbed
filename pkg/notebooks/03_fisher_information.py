# %% [markdown]
# # Quantum Fisher information for named families
#
# Each family varies one coordinate. The closed form is compared with the
# generic engine fed with exact derivatives of mean and covariance.

# %%
from gaussqfi import FAMILY_NAMES, ParamFamily, StateParams, analytic_derivative, closed_form_qfi, crb_single, qfi_single

base = StateParams(alpha=1.5, psi=0.2, r=0.6, chi=0.4, n_th=0.3)
for name in FAMILY_NAMES:
    f = ParamFamily.loss(1.5, 0.55, 0.3) if name == "loss_eta" else ParamFamily(name, base)
    state, d = analytic_derivative(f)
    closed, generic = closed_form_qfi(f), qfi_single(state, d)
    print(f"{name:9s} I={closed:12.6f}  generic={generic:12.6f}  crb(Q=100)={crb_single(closed, 100):.3e}")

# %% [markdown]
# The displacement information 4 P0 shrinks as the thermal occupation grows.

# %%
for n_th in (0, 0.5, 1, 2, 5):
    print(n_th, closed_form_qfi(ParamFamily("alpha", StateParams(n_th=n_th))))
