"""Off-shell Bethe vectors of a gl(3) chain built six different ways."""

# %%
import numpy as np
from gmpy2 import mpq

from naba.bethe import METHODS, BetheConfig, bethe_vector
from naba.monodromy import ChainSpec, coloring_projector
from naba.tensor import apply

spec = ChainSpec(N=3, L=3, c=1, xi=(0, mpq(1, 3), mpq(-3, 2)), twist=(1, 2, mpq(-1, 2)))
cfg = BetheConfig(ubar=(mpq(2, 5), mpq(7, 4)), vbar=(mpq(-5, 9),))

# %% Each construction (nested ansatz, trace formula, two partition sums,
# two recursions) returns the same rational vector.
vectors = {name: bethe_vector(spec, cfg, name) for name in METHODS}
ref = vectors["partition"]
for name, vec in vectors.items():
    print(f"{name:14s} identical: {not np.any(vec - ref != 0)}")

# %% The vector lives in the weight sector with a - b sites in state 2 and b in state 3.
P = coloring_projector(spec, cfg.a, cfg.b)
print("fixed by the sector projector:", not np.any(apply(P, ref) - ref != 0))
print("nonzero components:")
for k in np.flatnonzero(ref != 0):
    label = "".join(str(d + 1) for d in np.unravel_index(k, (3,) * spec.L))
    print(f"  |{label}>  {ref[k]}")
