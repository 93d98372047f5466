"""The domain-wall partition function: determinant, recursion and residue."""

# %%
from gmpy2 import mpq

from naba.dwpf import DwpfInput, dwpf_det, dwpf_recursive, dwpf_residue, residue_prediction

v = (mpq(0), mpq(1, 2), mpq(-4, 3), mpq(5, 2))
u = (mpq(2), mpq(3), mpq(-7, 5), mpq(1, 9))

# %% Both representations agree exactly at every size.
for n in range(5):
    inp = DwpfInput(v[:n], u[:n], 1)
    a, b = dwpf_det(inp), dwpf_recursive(inp)
    print(f"K_{n} = {a}  (recursion agrees: {a == b})")

# %% The residue at u_n = v_n reduces K_n to K_(n-1).
inp = DwpfInput(v, u, 1)
print("residue:", dwpf_residue(inp), " predicted:", residue_prediction(inp))
