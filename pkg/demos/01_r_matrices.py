"""R-matrices and the Yang-Baxter equation, checked in exact arithmetic."""

# %%
from gmpy2 import mpq

from naba.rmatrix import RMatrixKind, check_ybe, rational_R
from naba.scalars import max_abs

u1, u2, u3 = mpq(1, 3), mpq(-2), mpq(5, 7)

# %% Yang's matrix I + g(u, v) P solves the equation for every N.
for N in (2, 3, 4):
    res = check_ybe(lambda u, v, N=N: rational_R(N, u, v, 1), u1, u2, u3)
    print(f"rational  N={N}: max |residual| = {max_abs(res)}")

# %% The q-deformed matrix and its diagonal conjugation also work.
for kind, N in [("qdeformed", 2), ("qdeformed", 3), ("conjugated", 3)]:
    res = check_ybe(RMatrixKind(kind, N, q=mpq(3)).builder(), u1, u2, u3)
    print(f"{kind:10s} N={N}: max |residual| = {max_abs(res)}")

# %% The symmetric trigonometric ansatz only works for N = 2.
for N in (2, 3):
    res = check_ybe(RMatrixKind("naive_trig", N, q=mpq(3)).builder(), u1, u2, u3)
    print(f"symmetric trig N={N}: max |residual| = {max_abs(res):.4g}")
