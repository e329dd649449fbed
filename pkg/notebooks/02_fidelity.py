# %% [markdown]
# # Fidelity and Bures distance
#
# The closed-form fidelity between two Gaussian states, compared with the
# Uhlmann fidelity of their number-basis density matrices.

# %%
import math

from gaussqfi import StateParams, bures_distance, fidelity, from_params
from gaussqfi import fock

a = StateParams(alpha=0.0)
b = StateParams(alpha=1.0)
print("coherent pair", fidelity(from_params(a), from_params(b)), "vs e^-1", math.exp(-1))
print("Bures", bures_distance(from_params(a), from_params(b)))

# %%
p1 = StateParams(alpha=0.8, psi=0.4, r=0.6, chi=1.0, n_th=0.7)
p2 = StateParams(alpha=1.1, psi=-0.2, r=-0.3, chi=0.1, n_th=1.5)
n = max(fock.suggest_n_max(p1), fock.suggest_n_max(p2))
closed = fidelity(from_params(p1), from_params(p2))
numeric = fock.uhlmann_fidelity(fock.build_state(p1, n), fock.build_state(p2, n))
print(f"closed {closed:.12f}  number basis {numeric:.12f}  (n_max={n})")

# %% [markdown]
# Far-apart states approach the maximal Bures distance sqrt(2).

# %%
for alpha in (1, 3, 5, 7):
    d = bures_distance(from_params(StateParams()), from_params(StateParams(alpha=alpha)))
    print(alpha, d, math.sqrt(2) - d)
