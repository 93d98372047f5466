"""Off-shell Bethe vectors of gl(3)-invariant models and supporting identities.

Every construction takes a *model*: an object exposing ``T(u)`` (a
MonodromyEval with 1-based blocks), ``lam(i, u)`` (vacuum eigenvalues),
``vacuum()``, ``c``, ``N`` and ``dim``.  A ChainSpec may be passed instead
and is wrapped in a ChainModel.  The four independent constructions are

* ``bv_nested``       nested ansatz through the auxiliary gl(2) chain,
* ``bv_trace``        trace formula with R-matrix coefficients,
* ``bv_partition``    sums over partitions weighted by the DWPF (two orderings),
* ``bv_recursion_u/v`` recursions peeling off one u or one v.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product


from .dwpf import dwpf
from .errors import ParamError, PoleError, ShapeError
from .monodromy import AutomorphismModel, ChainModel, ChainSpec, composite_models
from .rmatrix import rational_R
from .scalars import FieldMode, coerce, f_prod, field_of, g_fn, is_pole
from .tensor import apply, basis_matrix, embed_pair, kron, matmul, multi_trace_element


@dataclass(frozen=True)
class BetheConfig:
    """Bethe parameters u (a of them) and v (b of them)."""

    ubar: tuple
    vbar: tuple

    def __post_init__(self):
        object.__setattr__(self, "ubar", tuple(coerce(x) for x in self.ubar))
        object.__setattr__(self, "vbar", tuple(coerce(x) for x in self.vbar))
        _distinct(self.ubar, "u")
        _distinct(self.vbar, "v")
        for u in self.ubar:
            for v in self.vbar:
                if is_pole(u - v):
                    raise PoleError(f"u and v collide at {u}")

    @property
    def a(self) -> int:
        return len(self.ubar)

    @property
    def b(self) -> int:
        return len(self.vbar)

    @property
    def mode(self) -> FieldMode:
        return field_of(self.ubar, self.vbar)

    def negated_swap(self) -> "BetheConfig":
        """(u; v) -> (-v; -u)."""
        return BetheConfig(tuple(-v for v in self.vbar), tuple(-u for u in self.ubar))


def _distinct(xs, name):
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if is_pole(xs[i] - xs[j]):
                raise PoleError(f"{name}_{i + 1} = {name}_{j + 1} = {xs[i]}")


def _model(obj, *params):
    """Wrap a ChainSpec, switching it to float mode if any parameter is float."""
    if isinstance(obj, ChainSpec):
        spec = obj
        if not field_of(*params).exact and spec.mode.exact:
            spec = spec.to_float()
        return ChainModel(spec)
    return obj


def _config(cfg) -> BetheConfig:
    if isinstance(cfg, BetheConfig):
        return cfg
    ubar, vbar = cfg
    return BetheConfig(tuple(ubar), tuple(vbar))


def apply_ops(model, ops, vec):
    """Apply the operator monomial T_{i1 j1}(w1) T_{i2 j2}(w2) ... to ``vec``."""
    for i, j, w in reversed(ops):
        if not vec.any():
            return vec
        vec = apply(model.T(w)[i, j], vec)
    return vec


def _zero_vec(model):
    v = model.vacuum()
    return v * 0


def _lam_prod(model, i, ws):
    out = None
    for w in ws:
        val = model.lam(i, w)
        out = val if out is None else out * val
    return 1 if out is None else out


# --------------------------------------------------------------------- gl(2)


def gl2_bethe_vector(spec_or_model, ubar, order=None):
    """B(u_1) ... B(u_n)|0> for an N = 2 model; ``order`` permutes the factors."""
    model = _model(spec_or_model, ubar)
    if model.N != 2:
        raise ShapeError("gl2_bethe_vector needs N = 2")
    ubar = tuple(coerce(u) for u in ubar)
    _distinct(ubar, "u")
    idx = order if order is not None else range(len(ubar))
    return apply_ops(model, [(1, 2, ubar[k]) for k in idx], model.vacuum())


# ------------------------------------------------------------ nested ansatz


def aux_monodromy(sites, w, c, mode):
    """2x2 blocks of r_{0a}(w, s_a) ... r_{01}(w, s_1) on (C^2)^{(x)a}.

    A site given as ``None`` carries the permutation P instead of r(w, s),
    which is the residue of r(w, s) at w = s divided by c.
    """
    eye1 = mode.eye(1)
    blocks = [[eye1, 0 * eye1], [0 * eye1, eye1]]
    for s in sites:
        if s is None:
            diag, off = mode.zero, mode.one
        else:
            diag, off = mode.one, mode.scalar(g_fn(w, s, c))
        site = [
            [diag * mode.eye(2) * (i == k) + off * basis_matrix(2, k + 1, i + 1, mode) for k in range(2)]
            for i in range(2)
        ]
        blocks = [
            [sum(kron(blocks[k][j], site[i][k]) for k in range(2)) for j in range(2)]
            for i in range(2)
        ]
    return blocks


def _apply_hat(model, aux, w, row, col, F):
    """(D(w) aux(w))_{row,col} applied to F, with D_{ik} = T_{i+1,k+1}(w).

    F has shape (2^a, dim H): the auxiliary chain is the leading factor.
    """
    Tw = model.T(w)
    out = None
    for k in (1, 2):
        chain = aux[k - 1][col - 1]
        if not chain.any():
            continue
        term = matmul(chain, matmul(F, Tw[row + 1, k + 1].T))
        out = term if out is None else out + term
    return out if out is not None else F * 0


def nested_F(model, ubar, vbar, residue_site: int | None = None):
    """F = B^(v_1) ... B^(v_b) (|0> (x) |Omega>) as an array of shape (2^a, dim H).

    With ``residue_site = k`` the first factor B^(v_1) is replaced by the
    residue at v_1 = u_k, divided by c, of B^(v_1) (k is 1-based, and u_k
    must be the first entry of ``ubar``).
    """
    a = len(ubar)
    mode = field_of(model.c, ubar, vbar) if model.vacuum().dtype == object else FieldMode("float")
    F = mode.zeros((2**a, model.dim))
    F[0] = model.vacuum()
    for p in reversed(range(len(vbar))):
        w = vbar[p]
        if residue_site is not None and p == 0:
            sites = [None] + list(ubar[1:])
        else:
            sites = list(ubar)
        F = _apply_hat(model, aux_monodromy(sites, w, model.c, mode), w, 1, 2, F)
    return F


def contract_row(model, args, F):
    """sum_beta B_{beta_1}(args_1) ... B_{beta_a}(args_a) F_beta with B_1 = T12, B_2 = T13."""
    a = len(args)
    out = _zero_vec(model)
    for idx in range(2**a):
        vec = F[idx]
        if not vec.any():
            continue
        betas = [(idx >> (a - 1 - s)) & 1 for s in range(a)]
        ops = [(1, 2 + beta, w) for beta, w in zip(betas, args)]
        out = out + apply_ops(model, ops, vec)
    return out


def bv_nested(spec_or_model, cfg):
    """Bethe vector from the nested construction through the auxiliary gl(2) chain."""
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    F = nested_F(model, cfg.ubar, cfg.vbar)
    return contract_row(model, cfg.ubar, F)


# ------------------------------------------------------------ trace formula


def trace_coefficients(cfg: BetheConfig, c, index_set=(2, 3)):
    """Coefficients r^{beta, j} of the trace formula, keyed by (j-tuple, beta-tuple).

    The R-matrix product runs over i = 1..b increasing (outer) and
    j = a..1 decreasing (inner); factors are ordered (k_1..k_a, n_1..n_b).
    """
    a, b = cfg.a, cfg.b
    mode = field_of(c, cfg.ubar, cfg.vbar)
    dims = [3] * (a + b)
    total = 3 ** (a + b)
    Rprod = mode.eye(total)
    for i in range(b):
        for j in reversed(range(a)):
            Rij = embed_pair(rational_R(3, cfg.vbar[i], cfg.ubar[j], c), dims, a + i, j)
            Rprod = matmul(Rprod, Rij)
    coeffs = {}
    for js in product(index_set, repeat=a):
        for betas in product(index_set, repeat=b):
            pairs = [(2, j) for j in js] + [(3, beta) for beta in betas]
            coeffs[js, betas] = multi_trace_element(Rprod, pairs, n=3) if pairs else Rprod[0, 0]
    return coeffs


def bv_trace(spec_or_model, cfg, index_set=(2, 3)):
    """Bethe vector from the trace formula."""
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    coeffs = trace_coefficients(cfg, model.c, index_set)
    vac = model.vacuum()
    out = _zero_vec(model)
    for (js, betas), r in coeffs.items():
        if not r:
            continue
        ops = [(1, j, u) for j, u in zip(js, cfg.ubar)] + [(2, beta, v) for beta, v in zip(betas, cfg.vbar)]
        out = out + r * apply_ops(model, ops, vac)
    return out


# ---------------------------------------------------------- partition sums


def partitions(a: int, b: int):
    """All (I_u, II_u, I_v, II_v) with #I_u = #I_v, lexicographic in the I subsets."""
    for n in range(min(a, b) + 1):
        for Iu in combinations(range(a), n):
            IIu = tuple(k for k in range(a) if k not in Iu)
            for Iv in combinations(range(b), n):
                IIv = tuple(k for k in range(b) if k not in Iv)
                yield Iu, IIu, Iv, IIv


def partition_weight(cfg: BetheConfig, c, Iu, IIu, Iv, IIv):
    """K_n(v_I | u_I) f(u_I, u_II) f(v_II, v_I)."""
    u, v = cfg.ubar, cfg.vbar
    uI, uII = [u[k] for k in Iu], [u[k] for k in IIu]
    vI, vII = [v[k] for k in Iv], [v[k] for k in IIv]
    return dwpf(vI, uI, c) * f_prod(uI, uII, c) * f_prod(vII, vI, c)


def bv_partition(spec_or_model, cfg):
    """sum K f f lambda_2(v_I) T13(u_I) T12(u_II) T23(v_II) |0>."""
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    vac = model.vacuum()
    out = _zero_vec(model)
    u, v = cfg.ubar, cfg.vbar
    for Iu, IIu, Iv, IIv in partitions(cfg.a, cfg.b):
        w = partition_weight(cfg, model.c, Iu, IIu, Iv, IIv) * _lam_prod(model, 2, [v[k] for k in Iv])
        ops = [(1, 3, u[k]) for k in Iu] + [(1, 2, u[k]) for k in IIu] + [(2, 3, v[k]) for k in IIv]
        out = out + w * apply_ops(model, ops, vac)
    return out


def bv_partition_alt(spec_or_model, cfg):
    """sum K f f lambda_2(u_I) T13(v_I) T23(v_II) T12(u_II) |0>."""
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    vac = model.vacuum()
    out = _zero_vec(model)
    u, v = cfg.ubar, cfg.vbar
    for Iu, IIu, Iv, IIv in partitions(cfg.a, cfg.b):
        w = partition_weight(cfg, model.c, Iu, IIu, Iv, IIv) * _lam_prod(model, 2, [u[k] for k in Iu])
        ops = [(1, 3, v[k]) for k in Iv] + [(2, 3, v[k]) for k in IIv] + [(1, 2, u[k]) for k in IIu]
        out = out + w * apply_ops(model, ops, vac)
    return out


# --------------------------------------------------------------- recursions


def bv_recursion_u(spec_or_model, cfg):
    """Recursion removing u_1: T12(u_1) Psi_{a-1,b} + T13(u_1) sum_l (...) Psi_{a-1,b-1}."""
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    u, v, c = cfg.ubar, cfg.vbar, model.c
    vac = model.vacuum()

    @lru_cache(maxsize=None)
    def psi(us: tuple, vs: tuple):
        if not us:
            return apply_ops(model, [(2, 3, v[k]) for k in vs], vac)
        u1, rest = u[us[0]], us[1:]
        out = apply(model.T(u1)[1, 2], psi(rest, vs))
        acc = None
        for pos, l in enumerate(vs):
            v_rest = vs[:pos] + vs[pos + 1 :]
            w = (model.lam(2, v[l]) * g_fn(v[l], u1, c) * f_prod(v[l], [u[k] for k in rest], c)
                 * f_prod([v[k] for k in v_rest], v[l], c))
            term = w * psi(rest, v_rest)
            acc = term if acc is None else acc + term
        if acc is not None:
            out = out + apply(model.T(u1)[1, 3], acc)
        return out

    return psi(tuple(range(cfg.a)), tuple(range(cfg.b)))


def bv_recursion_v(spec_or_model, cfg):
    """Recursion removing v_b: T23(v_b) Psi_{a,b-1} + T13(v_b) sum_j (...) Psi_{a-1,b-1}."""
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    u, v, c = cfg.ubar, cfg.vbar, model.c
    vac = model.vacuum()

    @lru_cache(maxsize=None)
    def psi(us: tuple, vs: tuple):
        if not vs:
            return apply_ops(model, [(1, 2, u[k]) for k in us], vac)
        vb, rest = v[vs[-1]], vs[:-1]
        out = apply(model.T(vb)[2, 3], psi(us, rest))
        acc = None
        for pos, j in enumerate(us):
            u_rest = us[:pos] + us[pos + 1 :]
            w = (model.lam(2, u[j]) * g_fn(vb, u[j], c) * f_prod([v[k] for k in rest], u[j], c)
                 * f_prod(u[j], [u[k] for k in u_rest], c))
            term = w * psi(u_rest, rest)
            acc = term if acc is None else acc + term
        if acc is not None:
            out = out + apply(model.T(vb)[1, 3], acc)
        return out

    return psi(tuple(range(cfg.a)), tuple(range(cfg.b)))


METHODS = {
    "nested": bv_nested,
    "trace": bv_trace,
    "partition": bv_partition,
    "partition-alt": bv_partition_alt,
    "recursion-u": bv_recursion_u,
    "recursion-v": bv_recursion_v,
}


def bethe_vector(spec_or_model, cfg, method: str = "partition"):
    try:
        fn = METHODS[method]
    except KeyError:
        raise ParamError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(spec_or_model, cfg)


# ------------------------------------------------------- unwanted vectors


def _swap_first(ubar, k):
    us = list(ubar)
    us[0], us[k - 1] = us[k - 1], us[0]
    return tuple(us)


def phi_vector(spec_or_model, cfg, z, k: int, keep_F: bool = False):
    """Unwanted-term vector Phi_{a,b}(z, u_k; u; v).

    By default u_1 and u_k are exchanged everywhere (the B-row and F), then
    B(u_1) is replaced by B(z).  With ``keep_F=True`` only B(u_k) in
    position k is replaced by B(z) while F(u; v) is left untouched.
    """
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar, z)
    if not 1 <= k <= cfg.a:
        raise IndexError(f"k must be in 1..{cfg.a}")
    z = coerce(z)
    if keep_F:
        args = list(cfg.ubar)
        args[k - 1] = z
        return contract_row(model, args, nested_F(model, cfg.ubar, cfg.vbar))
    us = _swap_first(cfg.ubar, k)
    F = nested_F(model, us, cfg.vbar)
    return contract_row(model, (z,) + us[1:], F)


def residue_vector(model, cfg: BetheConfig, z, k: int, j: int):
    """B(z) B(u'_2)...B(u'_a) [Res_{w=u_k} F(u'; {w, v_j-bar})] / c with u' = u with u_1<->u_k."""
    us = _swap_first(cfg.ubar, k)
    vs = (us[0],) + cfg.vbar[: j - 1] + cfg.vbar[j:]
    F = nested_F(model, us, vs, residue_site=1)
    return contract_row(model, (coerce(z),) + us[1:], F)


# ---------------------------------------------------------- other checks


def composite_bv_check(spec: ChainSpec, cut: int, vbar):
    """B(v)|0> minus its expansion over partial Bethe vectors of the two subchains."""
    if spec.N != 2:
        raise ShapeError("composite check is for N = 2")
    vbar = tuple(coerce(v) for v in vbar)
    _distinct(vbar, "v")
    full = _model(spec, vbar)
    m1, m2 = composite_models(full.spec, cut)
    vac = full.vacuum()
    lhs = apply_ops(full, [(1, 2, v) for v in vbar], vac)
    c = spec.c
    rhs = _zero_vec(full)
    n = len(vbar)
    for r in range(n + 1):
        for I in combinations(range(n), r):
            II = [k for k in range(n) if k not in I]
            vI, vII = [vbar[k] for k in I], [vbar[k] for k in II]
            w = _lam_prod(m2, 1, vI) * _lam_prod(m1, 2, vII) * f_prod(vII, vI, c)
            vec = apply_ops(m1, [(1, 2, x) for x in vI], vac)
            vec = apply_ops(m2, [(1, 2, x) for x in vII], vec)
            rhs = rhs + w * vec
    return lhs - rhs


def automorphism_bv_check(spec_or_model, cfg):
    """Image of Psi_{a,b}(u; v) under the automorphism minus Psi_{b,a}(-v; -u).

    The image is the partition sum with every T_ij(w) replaced by
    T~_ij(w) = T_{4-j,4-i}(-w) and lambda_i(w) by lambda_{4-i}(-w), which
    is the Bethe vector of the image model at (u; v).
    """
    cfg = _config(cfg)
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    image = bv_partition(AutomorphismModel(model), cfg)
    return image - bv_partition(model, cfg.negated_swap())


def commutation_identity_check(spec_or_model, ubar, vbar):
    """Operator sum of K f f [T13(u_I)T12(u_II)T23(v_II)T22(v_I) - T13(v_I)T23(v_II)T12(u_II)T22(u_I)]."""
    cfg = BetheConfig(tuple(ubar), tuple(vbar))
    model = _model(spec_or_model, cfg.ubar, cfg.vbar)
    u, v = cfg.ubar, cfg.vbar
    mode = field_of(model.c, u, v) if model.vacuum().dtype == object else FieldMode("float")

    def monomial(ops):
        out = mode.eye(model.dim)
        for i, j, w in reversed(ops):
            out = matmul(model.T(w)[i, j], out)
        return out

    total = mode.zeros((model.dim, model.dim))
    for Iu, IIu, Iv, IIv in partitions(cfg.a, cfg.b):
        w = partition_weight(cfg, model.c, Iu, IIu, Iv, IIv)
        x = monomial([(1, 3, u[k]) for k in Iu] + [(1, 2, u[k]) for k in IIu]
                     + [(2, 3, v[k]) for k in IIv] + [(2, 2, v[k]) for k in Iv])
        y = monomial([(1, 3, v[k]) for k in Iv] + [(2, 3, v[k]) for k in IIv]
                     + [(1, 2, u[k]) for k in IIu] + [(2, 2, u[k]) for k in Iu])
        total = total + w * (x - y)
    return total
