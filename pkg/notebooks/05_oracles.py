# %% [markdown]
# # Independent checks
#
# Two oracles that do not use the derivative formula: the curvature of the
# closed-form fidelity, and the SLD in a truncated number basis.

# %%
from gaussqfi import ParamFamily, StateParams, closed_form_qfi
from gaussqfi.check import fock_family_qfi
from gaussqfi.fd_oracle import qfi_from_bures, qfi_from_fidelity

f = ParamFamily("chi", StateParams.from_sigma(alpha=0.7, sigma=0.5, chi=0.2, n_th=0.3))
print("closed   ", closed_form_qfi(f))
print("fidelity ", qfi_from_fidelity(f.state_at, f.point, f.fd_step))
print("bures    ", qfi_from_bures(f.state_at, f.point, f.fd_step).extrapolated)
value, n = fock_family_qfi(f)
print("fock     ", value, "at n_max", n)

# %% [markdown]
# The same comparison over random points is what `gaussqfi check` runs.

# %%
from gaussqfi.check import run_check

report = run_check("fd", ["psi", "n_th", "loss_eta"], points=20, generic_points=200)
for name, row in report["families"].items():
    print(name, row["max_rel_generic"], row["max_rel_oracle"])
