"""R-matrices and the checks of the Yang-Baxter equation and related identities."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import gmpy2
from gmpy2 import mpq

from .errors import CommutationError, ParamError, PoleError, ShapeError
from .scalars import coerce, field_of, g_fn, is_exact, is_pole
from .tensor import (
    embed,
    embed_pair,
    kron,
    matmul,
    matmul_chain,
    mode_of,
    partial_transpose,
    permutation_op,
)


def rational_R(N: int, u, v, c):
    """Yang's R-matrix I + g(u, v) P on C^N (x) C^N."""
    mode = field_of(u, v, c)
    return mode.eye(N * N) + g_fn(u, v, c) * permutation_op(N, mode)


def _q_functions(u, v, q):
    u, v, q = coerce(u), coerce(v), coerce(q)
    if is_pole(u - v):
        raise PoleError(f"q-deformed R-matrix has a pole at u = v = {u}")
    if q == 0:
        raise ParamError("q must be invertible")
    qi = 1 / q
    return (q * u - qi * v) / (u - v), (q - qi) / (u - v)


def _weight_conserving(N, diag, same, upper, lower, mode):
    """Fill the weight-conserving pattern shared by all q-type R-matrices.

    ``diag`` on E_ii (x) E_ii, ``same`` on E_ii (x) E_jj, ``upper`` on
    E_ij (x) E_ji and ``lower`` on E_ji (x) E_ij for i < j.
    """
    out = mode.zeros((N * N, N * N))
    for i in range(N):
        out[i * N + i, i * N + i] = diag
        for j in range(N):
            if i == j:
                continue
            out[i * N + j, i * N + j] = same
            if i < j:
                out[i * N + j, j * N + i] = upper
                out[j * N + i, i * N + j] = lower
    return out


def q_deformed_R(N: int, u, v, q):
    """The q-deformation of Yang's matrix with multiplicative parameters."""
    fq, gq = _q_functions(u, v, q)
    mode = field_of(u, v, q)
    return _weight_conserving(N, fq, mode.one, coerce(u) * gq, coerce(v) * gq, mode)


def _exact_sqrt(x):
    x = coerce(x)
    if x < 0 or not (gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)):
        return None
    return mpq(gmpy2.isqrt(x.numerator), gmpy2.isqrt(x.denominator))


def sqrt_product(u, v, sqrt_uv=None):
    """sqrt(uv), taken from ``sqrt_uv`` when supplied (the s*t of u=s^2, v=t^2)."""
    if sqrt_uv is not None:
        return coerce(sqrt_uv)
    uv = coerce(u) * coerce(v)
    if is_exact(uv):
        root = _exact_sqrt(uv)
        if root is None:
            raise ParamError("sqrt(uv) is not rational; pass u = s^2, v = t^2 and sqrt_uv = s*t")
        return root
    return cmath.sqrt(uv)


def naive_trig_RN(N: int, u, v, q, sqrt_uv=None):
    """Symmetric trigonometric ansatz with sqrt(uv) g_q on both off-diagonal terms."""
    fq, gq = _q_functions(u, v, q)
    mode = field_of(u, v, q, sqrt_uv)
    w = sqrt_product(u, v, sqrt_uv) * gq
    return _weight_conserving(N, fq, mode.one, w, w, mode)


def trig_R2(u, v, q, sqrt_uv=None):
    """The 4x4 trigonometric R-matrix."""
    return naive_trig_RN(2, u, v, q, sqrt_uv)


def k_matrix(N: int, s, t):
    """diag((s/t)^((N+1)/2 - j)), j = 1..N; this is K(u/v) for u = s^2, v = t^2."""
    s, t = coerce(s), coerce(t)
    if s == 0 or t == 0:
        raise ParamError("k_matrix needs nonzero s and t")
    mode = field_of(s, t)
    ratio = s / t
    twice = [N + 1 - 2 * j for j in range(1, N + 1)]
    if N % 2 == 0:
        root = _exact_sqrt(ratio) if mode.exact else cmath.sqrt(ratio)
        if root is None:
            raise ParamError(f"(s/t)^(1/2) is not rational for N = {N}")
        entries = [root**m for m in twice]
    else:
        entries = [ratio ** (m // 2) for m in twice]
    out = mode.zeros((N, N))
    for j, e in enumerate(entries):
        out[j, j] = e
    return out


def conjugated_R(R, K_forward, K_back):
    """K_forward acting on the first factor from the left, K_back from the right.

    Requires K_back = K_forward^{-1} and [R, K (x) K] = 0.
    """
    N = K_forward.shape[0]
    if R.shape != (N * N, N * N):
        raise ShapeError(f"R of shape {R.shape} does not act on C^{N} (x) C^{N}")
    mode = mode_of(R)
    if not mode.is_zero(matmul(K_forward, K_back) - mode.eye(N)):
        raise ParamError("K_back is not the inverse of K_forward")
    KK = kron(K_forward, K_forward)
    if not mode.is_zero(matmul(R, KK) - matmul(KK, R)):
        raise CommutationError("R does not commute with K (x) K")
    return matmul_chain(embed(K_forward, [N, N], 0), R, embed(K_back, [N, N], 0))


def check_ybe(builder: Callable, u1, u2, u3):
    """R12(u1,u2) R13(u1,u3) R23(u2,u3) - R23 R13 R12 on three factors."""
    R12 = builder(u1, u2)
    N = round(R12.shape[0] ** 0.5)
    dims = [N, N, N]
    r12 = embed_pair(R12, dims, 0, 1)
    r13 = embed_pair(builder(u1, u3), dims, 0, 2)
    r23 = embed_pair(builder(u2, u3), dims, 1, 2)
    return matmul_chain(r12, r13, r23) - matmul_chain(r23, r13, r12)


def check_gln_invariance(R, G, linearized: bool = False):
    """R (G (x) G) - (G (x) G) R, or [R, G (x) 1 + 1 (x) G] when linearized."""
    N = G.shape[0]
    if G.shape != (N, N) or R.shape != (N * N, N * N):
        raise ShapeError(f"G of shape {G.shape} does not match R of shape {R.shape}")
    if linearized:
        GG = embed(G, [N, N], 0) + embed(G, [N, N], 1)
    else:
        GG = kron(G, G)
    return matmul(R, GG) - matmul(GG, R)


def crossed_r(u, v, c):
    """r'(u, v): the C^2 Yang matrix at (-u, -v), transposed in its second factor."""
    return partial_transpose(rational_R(2, -coerce(u), -coerce(v), c), [2, 2], 1)


def check_mixed_rtt(u, v, w, c):
    """r12(u,v) r'13(u,w) r'23(v,w) - r'23(v,w) r'13(u,w) r12(u,v)."""
    dims = [2, 2, 2]
    r12 = embed_pair(rational_R(2, u, v, c), dims, 0, 1)
    p13 = embed_pair(crossed_r(u, w, c), dims, 0, 2)
    p23 = embed_pair(crossed_r(v, w, c), dims, 1, 2)
    return matmul_chain(r12, p13, p23) - matmul_chain(p23, p13, r12)


@dataclass(frozen=True)
class RMatrixKind:
    """Family of R-matrices: rational, qdeformed, trig2, naive_trig or conjugated.

    ``builder()`` returns a two-argument callable.  The trigonometric and
    conjugated families take square-root parameters s, t (u = s^2, v = t^2).
    """

    kind: str
    N: int = 2
    c: object = None
    q: object = None

    def __post_init__(self):
        if self.kind not in ("rational", "qdeformed", "trig2", "naive_trig", "conjugated"):
            raise ParamError(f"unknown R-matrix kind {self.kind!r}")
        if self.N < 2:
            raise ParamError("N must be at least 2")
        if self.kind == "rational" and (self.c is None or coerce(self.c) == 0):
            raise ParamError("rational R-matrix needs c != 0")
        if self.kind != "rational":
            q = coerce(self.q) if self.q is not None else 0
            if q == 0 or q * q == 1:
                raise ParamError("q-type R-matrices need q != 0 and q^2 != 1")

    @property
    def squared_params(self) -> bool:
        return self.kind in ("trig2", "naive_trig", "conjugated")

    def builder(self) -> Callable:
        N, c, q = self.N, self.c, self.q
        if self.kind == "rational":
            return lambda u, v: rational_R(N, u, v, c)
        if self.kind == "qdeformed":
            return lambda u, v: q_deformed_R(N, u, v, q)
        if self.kind == "trig2":
            return lambda s, t: trig_R2(s * s, t * t, q, s * t)
        if self.kind == "naive_trig":
            return lambda s, t: naive_trig_RN(N, s * s, t * t, q, s * t)
        return lambda s, t: conjugated_R(
            q_deformed_R(N, s * s, t * t, q), k_matrix(N, t, s), k_matrix(N, s, t)
        )
