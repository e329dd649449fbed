# %% [markdown]
# # Phase sensitivity at fixed photon number
#
# For pure states with N = alpha^2 + sinh^2 r, split the photons between
# displacement and squeezing to maximise the phase information.

# %%
from gaussqfi.scaling import phase_information, phase_scaling

rows, slope, r2 = phase_scaling([1e2, 1e3, 1e4, 1e5, 1e6])
for r in rows:
    print(f"N={r.n_total:8.0e}  fraction={r.fraction:.2e}  dpsi={r.delta_psi:.3e}")
print("slope", slope, "R^2", r2)

# %% [markdown]
# The optimum puts essentially everything into squeezing, where the
# information is 8 N (N + 1), so the error falls as 1/N. Coherent light alone
# gives the 1/sqrt(N) shot-noise law.

# %%
_, slope_coh, _ = phase_scaling([1e2, 1e3, 1e4, 1e5, 1e6], coherent_only=True)
print("coherent slope", slope_coh)
for f in (0.0, 0.5, 0.9, 1.0):
    print(f, phase_information(1e4, f))
