# %% [markdown]
# # Estimating attenuation
#
# An amplitude-squeezed input loses a fraction eta of its light. For sigma != 1
# the information diverges as eta -> 0.

# %%
import numpy as np

from gaussqfi import ParamFamily, closed_form_qfi
from gaussqfi.families import loss_phi_qfi

for sigma in (0.5, 1.0, 2.0):
    row = [closed_form_qfi(ParamFamily.loss(1.0, sigma, eta)) for eta in (1e-4, 1e-2, 0.3, 0.9)]
    print(sigma, np.round(row, 3))

# %% [markdown]
# Writing 1 - eta = cos^2(phi) turns this into a phase-like parameter.

# %%
for phi in (0.1, 0.5, 1.0, 1.4):
    print(phi, loss_phi_qfi(1.0, 0.5, phi))
