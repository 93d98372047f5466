"""Domain-wall partition function K_n(v|u): determinant and recursive evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParamError, PoleError
from .scalars import coerce, f_prod, field_of, g_fn, is_pole


@dataclass(frozen=True)
class DwpfInput:
    """Two sets v, u of equal size n and the coupling c."""

    vbar: tuple
    ubar: tuple
    c: object

    def __post_init__(self):
        object.__setattr__(self, "vbar", tuple(coerce(x) for x in self.vbar))
        object.__setattr__(self, "ubar", tuple(coerce(x) for x in self.ubar))
        object.__setattr__(self, "c", coerce(self.c))
        if len(self.vbar) != len(self.ubar):
            raise ParamError("v and u must have the same cardinality")
        _check_distinct(self.vbar, "v")
        _check_distinct(self.ubar, "u")
        for v in self.vbar:
            for u in self.ubar:
                if is_pole(v - u):
                    raise PoleError(f"v = u = {v}")

    @property
    def n(self) -> int:
        return len(self.vbar)


def _check_distinct(xs, name):
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            if is_pole(xs[a] - xs[b]):
                raise PoleError(f"{name}_{a + 1} = {name}_{b + 1} = {xs[a]}")


def det(matrix):
    """Determinant: fraction-free (Bareiss) elimination for exact entries."""
    n = len(matrix)
    if n == 0:
        return coerce(1)
    mode = field_of([x for row in matrix for x in row])
    if not mode.exact:
        return complex(np.linalg.det(np.array(matrix, dtype=np.complex128)))
    m = [[coerce(x) for x in row] for row in matrix]
    sign = 1
    prev = coerce(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return coerce(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _entry(v, u, c):
    """Determinant entry c / ((v - u)(v - u + c))."""
    d = v - u
    if is_pole(d) or is_pole(d + c):
        raise PoleError(f"determinant entry singular at v - u = {d}")
    return c / (d * (d + c))


def _prefactor(vbar, ubar, c):
    """prod_{j,k} (v_j - u_k + c) / prod_{j<k} (v_j - v_k)(u_k - u_j)."""
    n = len(vbar)
    one = field_of(vbar, ubar, c).one
    num = one
    for v in vbar:
        for u in ubar:
            num = num * (v - u + c)
    den = one
    for j in range(n):
        for k in range(j + 1, n):
            den = den * (vbar[j] - vbar[k]) * (ubar[k] - ubar[j])
    return num / den


def dwpf_det(inp: DwpfInput):
    """K_n from the determinant representation; K_0 = 1."""
    if inp.n == 0:
        return field_of(inp.c).one
    v, u, c = inp.vbar, inp.ubar, inp.c
    matrix = [[_entry(v[j], u[k], c) for k in range(inp.n)] for j in range(inp.n)]
    return _prefactor(v, u, c) * det(matrix)


def dwpf_recursive(inp: DwpfInput):
    """K_n = sum_i g(v_i, u_n) f(v_i-bar, v_i) f(v_i, u_n-bar) K_{n-1}(v_i-bar | u_n-bar)."""
    n = inp.n
    if n == 0:
        return field_of(inp.c).one
    v, u, c = inp.vbar, inp.ubar, inp.c
    if n == 1:
        return g_fn(v[0], u[0], c)
    un, u_rest = u[-1], u[:-1]
    total = field_of(inp.c, v, u).zero
    for i in range(n):
        v_rest = v[:i] + v[i + 1 :]
        weight = g_fn(v[i], un, c) * f_prod(v_rest, v[i], c) * f_prod(v[i], u_rest, c)
        total = total + weight * dwpf_recursive(DwpfInput(v_rest, u_rest, c))
    return total


def dwpf(vbar, ubar, c):
    """K_n(v|u) by the determinant formula."""
    return dwpf_det(DwpfInput(tuple(vbar), tuple(ubar), c))


def dwpf_residue(inp: DwpfInput):
    """lim_{u_n -> v_n} (u_n - v_n) K_n, taken exactly from the determinant.

    Only the (n, n) entry of the matrix is singular at u_n = v_n, and
    (u_n - v_n) c / ((v_n - u_n)(v_n - u_n + c)) tends to -1, so the limit
    is -prefactor(u_n = v_n) times the (n, n) cofactor.
    """
    n = inp.n
    if n == 0:
        raise ParamError("residue needs n >= 1")
    v, c = inp.vbar, inp.c
    u = inp.ubar[:-1] + (v[-1],)
    minor = [[_entry(v[j], u[k], c) for k in range(n - 1)] for j in range(n - 1)]
    cof = det(minor) if n > 1 else field_of(c).one
    return -_prefactor(v, u, c) * cof


def dwpf_residue_numeric(inp: DwpfInput, eps=(1e-6, 1e-7)):
    """Two-step linear extrapolation of h K_n(u_n = v_n + h) to h = 0 (float)."""
    v = tuple(complex(x) for x in inp.vbar)
    u = tuple(complex(x) for x in inp.ubar[:-1])
    c = complex(inp.c)
    vals = [h * dwpf_det(DwpfInput(v, u + (v[-1] + h,), c)) for h in eps]
    h1, h2 = eps
    return (h1 * vals[1] - h2 * vals[0]) / (h1 - h2)


def residue_prediction(inp: DwpfInput):
    """-c f(v_n-bar, v_n) f(v_n, u_n-bar) K_{n-1}(v_n-bar | u_n-bar)."""
    v, u, c = inp.vbar, inp.ubar, inp.c
    rest = DwpfInput(v[:-1], u[:-1], c)
    return -c * f_prod(v[:-1], v[-1], c) * f_prod(v[-1], u[:-1], c) * dwpf_det(rest)


def dwpf_residue_check(inp: DwpfInput, numeric: bool = False):
    """Difference between the residue of K_n at u_n = v_n and its predicted value.

    ``inp`` supplies v and u_1..u_{n-1}; its u_n is ignored (it is sent to v_n).
    Exact inputs give an exact residue; ``numeric=True`` uses the float
    two-step extrapolation instead.
    """
    if numeric:
        pred = residue_prediction(DwpfInput(
            tuple(complex(x) for x in inp.vbar), tuple(complex(x) for x in inp.ubar), complex(inp.c)))
        return dwpf_residue_numeric(inp) - pred
    return dwpf_residue(inp) - residue_prediction(inp)


def dwpf_k2_expansion(vbar, ubar, c):
    """Two-term closed form of K_2."""
    (v1, v2), (u1, u2) = vbar, ubar
    return (g_fn(v1, u2, c) * g_fn(v2, u1, c) * f_prod(v2, v1, c) * f_prod(v1, u1, c)
            + g_fn(v2, u2, c) * g_fn(v1, u1, c) * f_prod(v1, v2, c) * f_prod(v2, u1, c))
