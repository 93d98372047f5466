"""Monodromy matrices of the inhomogeneous XXX chain and related structures.

The monodromy T(u) = R_{0L}(u, xi_L) ... R_{01}(u, xi_1) is stored as an
N x N grid of operators on the quantum space (C^N)^{(x)L}, site 1 being the
most significant tensor factor.  With R = I + g P, the entry T_ij(u) acts on
a single site as g E^{ji}, so it moves a site from state i to state j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ParamError, PoleError, ShapeError
from .rmatrix import rational_R
from .scalars import (
    FieldMode,
    coerce,
    decode_scalar,
    encode_scalar,
    f_fn,
    field_of,
    g_fn,
    is_pole,
)
from .tensor import SpaceShape, basis_matrix, kron, matmul


@dataclass(frozen=True)
class ChainSpec:
    """Inhomogeneous chain: local dimension N, length L, coupling c, xi, twist."""

    N: int
    L: int
    c: object
    xi: tuple
    twist: tuple | None = None

    def __post_init__(self):
        if int(self.N) < 2:
            raise ParamError("N must be at least 2")
        if int(self.L) < 1:
            raise ParamError("L must be at least 1")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "c", coerce(self.c))
        object.__setattr__(self, "xi", tuple(coerce(x) for x in self.xi))
        if len(self.xi) != self.L:
            raise ParamError(f"expected {self.L} inhomogeneities, got {len(self.xi)}")
        if self.c == 0:
            raise ParamError("coupling c must be nonzero")
        if self.twist is not None:
            tw = tuple(coerce(k) for k in self.twist)
            if len(tw) != self.N:
                raise ParamError(f"twist needs {self.N} entries, got {len(tw)}")
            if any(k == 0 for k in tw):
                raise ParamError("twist entries must be nonzero")
            object.__setattr__(self, "twist", tw)
        SpaceShape((self.N,) * self.L)

    @property
    def mode(self) -> FieldMode:
        return field_of(self.c, self.xi, self.twist)

    @property
    def dim(self) -> int:
        return self.N**self.L

    @property
    def shape(self) -> SpaceShape:
        return SpaceShape((self.N,) * self.L)

    def kappa(self, i: int):
        return self.twist[i - 1] if self.twist is not None else self.mode.one

    def to_float(self) -> "ChainSpec":
        tw = None if self.twist is None else tuple(complex(k) for k in self.twist)
        return ChainSpec(self.N, self.L, complex(self.c), tuple(complex(x) for x in self.xi), tw)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "L": self.L,
            "c": encode_scalar(self.c),
            "xi": [encode_scalar(x) for x in self.xi],
            "twist": None if self.twist is None else [encode_scalar(k) for k in self.twist],
        }

    @classmethod
    def from_json(cls, obj: dict, pointer: str = "") -> "ChainSpec":
        for key in ("N", "L", "c", "xi"):
            if key not in obj:
                raise ConfigError(f"missing field {key!r}", f"{pointer}/{key}")
        for key in ("N", "L"):
            if not isinstance(obj[key], int) or isinstance(obj[key], bool):
                raise ConfigError("must be an integer", f"{pointer}/{key}")
        if obj["N"] < 2:
            raise ConfigError("N must be at least 2", f"{pointer}/N")
        if obj["L"] < 1:
            raise ConfigError("L must be at least 1", f"{pointer}/L")
        if not isinstance(obj["xi"], list) or len(obj["xi"]) != obj["L"]:
            raise ConfigError(f"expected a list of {obj['L']} scalars", f"{pointer}/xi")
        try:
            c = decode_scalar(obj["c"])
        except ParamError as exc:
            raise ConfigError(str(exc), f"{pointer}/c") from exc
        xi = []
        for k, x in enumerate(obj["xi"]):
            try:
                xi.append(decode_scalar(x))
            except ParamError as exc:
                raise ConfigError(str(exc), f"{pointer}/xi/{k}") from exc
        twist = obj.get("twist")
        if twist is not None:
            if not isinstance(twist, list) or len(twist) != obj["N"]:
                raise ConfigError(f"expected a list of {obj['N']} scalars", f"{pointer}/twist")
            try:
                twist = [decode_scalar(k) for k in twist]
            except ParamError as exc:
                raise ConfigError(str(exc), f"{pointer}/twist") from exc
        try:
            return cls(obj["N"], obj["L"], c, tuple(xi), None if twist is None else tuple(twist))
        except ParamError as exc:
            raise ConfigError(str(exc), pointer or "/") from exc


@dataclass(frozen=True)
class MonodromyEval:
    """T(u) as an N x N grid of quantum-space operators; indexing is 1-based."""

    spec: ChainSpec
    u: object
    blocks: tuple = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.blocks)

    def __getitem__(self, ij):
        i, j = ij
        if not (1 <= i <= self.N and 1 <= j <= self.N):
            raise IndexError(f"block ({i}, {j}) out of range 1..{self.N}")
        return self.blocks[i - 1][j - 1]

    def full(self):
        """The operator on V_0 (x) H with the auxiliary space as first factor."""
        return np.block([list(row) for row in self.blocks])

    def trace(self):
        return sum(self.blocks[i][i] for i in range(self.N))


def _site_blocks(N, u, xi, c, mode, polynomial):
    """Auxiliary blocks of R_{0m}(u, xi): delta_ik I + g(u, xi) E^{ki}."""
    if polynomial:
        diag, off = mode.scalar(u) - mode.scalar(xi), mode.scalar(c)
    else:
        if is_pole(coerce(u) - coerce(xi)):
            raise PoleError(f"spectral parameter {u} collides with inhomogeneity {xi}")
        diag, off = mode.one, mode.scalar(g_fn(u, xi, c))
    eye = mode.eye(N)
    return [
        [(diag * eye if i == k else mode.zeros((N, N))) + off * basis_matrix(N, k + 1, i + 1, mode)
         for k in range(N)]
        for i in range(N)
    ]


def build_monodromy(spec: ChainSpec, u, polynomial: bool = False) -> MonodromyEval:
    """T(u) = K R_{0L}(u, xi_L) ... R_{01}(u, xi_1), sliced into auxiliary blocks.

    With ``polynomial=True`` every site factor is (u - xi) I + c P, which
    multiplies T(u) by prod_k (u - xi_k) and makes it finite at u = xi_k.
    """
    mode = field_of(spec.c, spec.xi, spec.twist, u)
    N = spec.N
    for k, x in enumerate(spec.xi):
        if not polynomial and is_pole(coerce(u) - x):
            raise PoleError(f"u = {u} collides with xi_{k + 1} = {x}")
    blocks = _site_blocks(N, u, spec.xi[0], spec.c, mode, polynomial)
    for m in range(1, spec.L):
        site = _site_blocks(N, u, spec.xi[m], spec.c, mode, polynomial)
        blocks = [
            [sum(kron(blocks[k][j], site[i][k]) for k in range(N)) for j in range(N)]
            for i in range(N)
        ]
    if spec.twist is not None:
        blocks = [[mode.scalar(spec.twist[i]) * blocks[i][j] for j in range(N)] for i in range(N)]
    return MonodromyEval(spec, u, tuple(tuple(row) for row in blocks))


def vacuum(spec: ChainSpec, mode: FieldMode | None = None):
    """|0> = e_1 (x) ... (x) e_1."""
    mode = mode or spec.mode
    out = mode.zeros(spec.dim)
    out[0] = mode.one
    return out


def vacuum_eigenvalues(spec: ChainSpec, u, polynomial: bool = False) -> list:
    """[lambda_1(u), ..., lambda_N(u)] with lambda_1 = kappa_1 f(u, xi) and lambda_i = kappa_i."""
    mode = field_of(spec.c, spec.xi, spec.twist, u)
    u = mode.scalar(u)
    if polynomial:
        first = mode.one
        rest = mode.one
        for x in spec.xi:
            first *= u - x + spec.c
            rest *= u - x
    else:
        first = mode.one
        for x in spec.xi:
            first *= f_fn(u, x, spec.c)
        rest = mode.one
    lam = [first] + [rest] * (spec.N - 1)
    return [mode.scalar(spec.kappa(i + 1)) * lam[i] for i in range(spec.N)]


class ChainModel:
    """Monodromy of an XXX chain with cached evaluations.

    This is the interface consumed by the Bethe-vector constructions: it
    exposes ``T(u)`` (a MonodromyEval), ``lam(i, u)`` and ``vacuum()``.
    """

    def __init__(self, spec: ChainSpec, polynomial: bool = False):
        self.spec = spec
        self.polynomial = polynomial
        self._cache = {}

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def c(self):
        return self.spec.c

    def T(self, u) -> MonodromyEval:
        key = coerce(u)
        if key not in self._cache:
            self._cache[key] = build_monodromy(self.spec, key, self.polynomial)
        return self._cache[key]

    def op(self, i: int, j: int, u):
        return self.T(u)[i, j]

    def lam(self, i: int, u):
        return vacuum_eigenvalues(self.spec, u, self.polynomial)[i - 1]

    def vacuum(self, mode: FieldMode | None = None):
        return vacuum(self.spec, mode)


class AutomorphismModel:
    """Image of a model under T_ij(u) -> T_{N+1-j, N+1-i}(-u).

    Shares the vacuum of the base model; its vacuum eigenvalues are
    lambda_{N+1-i}(-u).
    """

    def __init__(self, base):
        self.base = base
        self._cache = {}

    @property
    def N(self) -> int:
        return self.base.N

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def c(self):
        return self.base.c

    @property
    def spec(self):
        return self.base.spec

    def T(self, u) -> MonodromyEval:
        key = coerce(u)
        if key not in self._cache:
            src = self.base.T(-key)
            N = self.N
            blocks = tuple(tuple(src[N + 1 - j, N + 1 - i] for j in range(1, N + 1)) for i in range(1, N + 1))
            self._cache[key] = MonodromyEval(self.base.spec, key, blocks)
        return self._cache[key]

    def op(self, i: int, j: int, u):
        return self.T(u)[i, j]

    def lam(self, i: int, u):
        return self.base.lam(self.N + 1 - i, -coerce(u))

    def vacuum(self, mode: FieldMode | None = None):
        return self.base.vacuum(mode)


def as_model(obj):
    return ChainModel(obj) if isinstance(obj, ChainSpec) else obj


def automorphism_image(spec, u) -> MonodromyEval:
    """Grid of T~_ij(u) = T_{N+1-j, N+1-i}(-u)."""
    return AutomorphismModel(as_model(spec)).T(u)


def _product_tables(model, u, v):
    """All products T_ij(u) T_kl(v) and T_kl(v) T_ij(u), keyed by (i, j, k, l)."""
    Tu, Tv = model.T(u), model.T(v)
    N = model.N
    uv, vu = {}, {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                for l in range(1, N + 1):
                    uv[i, j, k, l] = matmul(Tu[i, j], Tv[k, l])
                    vu[i, j, k, l] = matmul(Tv[k, l], Tu[i, j])
    return uv, vu


def check_rtt(spec_or_model, u, v, tables=None):
    """R12(u,v) T1(u) T2(v) - T2(v) T1(u) R12(u,v) on V_1 (x) V_2 (x) H."""
    model = as_model(spec_or_model)
    N, D = model.N, model.dim
    uv, vu = tables or _product_tables(model, u, v)
    R = rational_R(N, u, v, model.c)
    mode = field_of(model.c, u, v)
    pairs = [(i, k) for i in range(1, N + 1) for k in range(1, N + 1)]
    # block ((i,k),(j,l)) of T1(u)T2(v) is T_ij(u)T_kl(v); of T2(v)T1(u) it is T_kl(v)T_ij(u)
    left = {(a, b): uv[a[0], b[0], a[1], b[1]] for a in pairs for b in pairs}
    right = {(a, b): vu[a[0], b[0], a[1], b[1]] for a in pairs for b in pairs}
    nz = list(zip(*np.nonzero(R)))
    out = mode.zeros((N * N * D, N * N * D))
    for bi, b in enumerate(pairs):
        for ai, a in enumerate(pairs):
            blk = mode.zeros((D, D))
            for r, cidx in nz:
                if r == ai:
                    blk = blk + R[r, cidx] * left[pairs[cidx], b]
                if cidx == bi:
                    blk = blk - R[r, cidx] * right[a, pairs[r]]
            out[ai * D : (ai + 1) * D, bi * D : (bi + 1) * D] = blk
    return out


def check_crcomp(spec_or_model, u, v, tables=None) -> dict:
    """Residuals of [T_ij(u), T_kl(v)] = g(u,v) (T_kj(v) T_il(u) - T_kj(u) T_il(v))."""
    model = as_model(spec_or_model)
    N = model.N
    uv, vu = tables or _product_tables(model, u, v)
    g = g_fn(u, v, model.c)
    out = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                for l in range(1, N + 1):
                    lhs = uv[i, j, k, l] - vu[i, j, k, l]
                    # T_kj(v) T_il(u) is the (i,l,k,j) entry of the v-u table
                    rhs = g * (vu[i, l, k, j] - uv[k, j, i, l])
                    out[i, j, k, l] = lhs - rhs
    return out


def rtt_and_crcomp(spec_or_model, u, v):
    """Both RTT residual forms sharing one table of products."""
    model = as_model(spec_or_model)
    tables = _product_tables(model, u, v)
    return check_rtt(model, u, v, tables), check_crcomp(model, u, v, tables)


def weight_counts(spec: ChainSpec) -> np.ndarray:
    """Array (D, N): number of sites in each local state for every basis vector."""
    labels = np.array(np.unravel_index(np.arange(spec.dim), (spec.N,) * spec.L)).T
    return np.stack([(labels == s).sum(axis=1) for s in range(spec.N)], axis=1)


def coloring_projector(spec: ChainSpec, a: int, b: int, mode: FieldMode | None = None):
    """Diagonal projector onto states with a-b sites in state 2 and b sites in state 3."""
    if spec.N != 3:
        raise ShapeError("coloring projector is defined for N = 3")
    mode = mode or spec.mode
    counts = weight_counts(spec)
    out = mode.zeros((spec.dim, spec.dim))
    for k in np.flatnonzero((counts[:, 1] == a - b) & (counts[:, 2] == b)):
        out[k, k] = mode.one
    return out


def sector_indices(spec: ChainSpec, a: int, b: int) -> np.ndarray:
    counts = weight_counts(spec)
    return np.flatnonzero((counts[:, 1] == a - b) & (counts[:, 2] == b))


def composite_split(spec: ChainSpec, cut: int, u):
    """(T^(1)(u), T^(2)(u)) on sites 1..cut and cut+1..L, embedded in the full space.

    T(u) = T^(2)(u) T^(1)(u); the twist, if any, is carried by T^(2).
    """
    if not 1 <= cut < spec.L:
        raise IndexError(f"cut must satisfy 1 <= cut < L = {spec.L}")
    s1 = ChainSpec(spec.N, cut, spec.c, spec.xi[:cut])
    s2 = ChainSpec(spec.N, spec.L - cut, spec.c, spec.xi[cut:], spec.twist)
    mode = field_of(spec.c, spec.xi, spec.twist, u)
    m1, m2 = build_monodromy(s1, u), build_monodromy(s2, u)
    right = mode.eye(spec.N ** (spec.L - cut))
    left = mode.eye(spec.N**cut)
    N = spec.N
    t1 = tuple(tuple(kron(m1[i, j], right) for j in range(1, N + 1)) for i in range(1, N + 1))
    t2 = tuple(tuple(kron(left, m2[i, j]) for j in range(1, N + 1)) for i in range(1, N + 1))
    return MonodromyEval(s1, u, t1), MonodromyEval(s2, u, t2)


class BlockModel:
    """Model over a precomputed family of monodromy evaluations (used for subchains)."""

    def __init__(self, builder, lam, vac, N, dim, c):
        self._builder = builder
        self._lam = lam
        self._vac = vac
        self.N, self.dim, self.c = N, dim, c
        self._cache = {}

    def T(self, u):
        key = coerce(u)
        if key not in self._cache:
            self._cache[key] = self._builder(key)
        return self._cache[key]

    def op(self, i, j, u):
        return self.T(u)[i, j]

    def lam(self, i, u):
        return self._lam(i, coerce(u))

    def vacuum(self, mode=None):
        return self._vac.copy()


def composite_models(spec: ChainSpec, cut: int):
    """Models for T^(1) and T^(2) acting on the full quantum space."""
    s1 = ChainSpec(spec.N, cut, spec.c, spec.xi[:cut])
    s2 = ChainSpec(spec.N, spec.L - cut, spec.c, spec.xi[cut:], spec.twist)
    vac = vacuum(spec)
    m1 = BlockModel(lambda u: composite_split(spec, cut, u)[0],
                    lambda i, u: vacuum_eigenvalues(s1, u)[i - 1], vac, spec.N, spec.dim, spec.c)
    m2 = BlockModel(lambda u: composite_split(spec, cut, u)[1],
                    lambda i, u: vacuum_eigenvalues(s2, u)[i - 1], vac, spec.N, spec.dim, spec.c)
    return m1, m2
