"""Dense operators on tensor products of local spaces.

Operators are plain 2-D numpy arrays (``object`` dtype holding ``mpq`` in
exact mode, ``complex128`` in float mode) and vectors are 1-D arrays.
Multi-indices are row-major with the first factor most significant, which
is the ordering produced by ``np.kron``.  Local basis labels are 1-based in
the public API.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import reduce
from math import prod

import numpy as np
from gmpy2 import mpq

from .errors import ShapeError
from .scalars import EXACT, FieldMode, decode_scalar, encode_scalar

DEFAULT_DIM_CAP = 2**20


def dim_cap() -> int:
    env = os.environ.get("NABA_DIM_CAP")
    return int(env) if env else DEFAULT_DIM_CAP


@dataclass(frozen=True)
class SpaceShape:
    """Ordered local dimensions of a tensor product space."""

    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 1 for d in dims):
            raise ShapeError(f"local dimensions must be positive: {dims}")
        if self.total > dim_cap():
            raise ShapeError(f"total dimension {self.total} exceeds cap {dim_cap()}")

    @property
    def total(self) -> int:
        return prod(self.dims)

    def __len__(self):
        return len(self.dims)


def _shape(shape) -> SpaceShape:
    return shape if isinstance(shape, SpaceShape) else SpaceShape(tuple(shape))


def identity(dim: int, mode: FieldMode = EXACT):
    return mode.eye(dim)


def basis_matrix(N: int, i: int, j: int, mode: FieldMode = EXACT):
    """E^{ij}: a single unit at row i, column j (1-based)."""
    if not (1 <= i <= N and 1 <= j <= N):
        raise IndexError(f"basis labels ({i}, {j}) out of range 1..{N}")
    out = mode.zeros((N, N))
    out[i - 1, j - 1] = mode.one
    return out


def basis_vector(N: int, i: int, mode: FieldMode = EXACT):
    if not 1 <= i <= N:
        raise IndexError(f"basis label {i} out of range 1..{N}")
    out = mode.zeros(N)
    out[i - 1] = mode.one
    return out


def kron(*ops):
    return reduce(np.kron, ops)


def mode_of(arr) -> FieldMode:
    from .scalars import FLOAT

    return EXACT if np.asarray(arr).dtype == object else FLOAT


def embed(op, shape, site: int):
    """Act with ``op`` on factor ``site`` (0-based) and as identity elsewhere."""
    shape = _shape(shape)
    if not 0 <= site < len(shape):
        raise IndexError(f"site {site} out of range for {len(shape)} factors")
    if op.shape != (shape.dims[site],) * 2:
        raise ShapeError(f"operator of shape {op.shape} on factor of dim {shape.dims[site]}")
    mode = mode_of(op)
    left = prod(shape.dims[:site])
    right = prod(shape.dims[site + 1 :])
    return kron(mode.eye(left), op, mode.eye(right))


def _multi_indices(shape: SpaceShape) -> np.ndarray:
    """Array of shape (D, m) listing the local labels (0-based) of each index."""
    return np.array(np.unravel_index(np.arange(shape.total), shape.dims)).T


def embed_pair(op, shape, p: int, q: int):
    """Act with a two-factor operator ``op`` on factors (p, q), in that order."""
    shape = _shape(shape)
    if p == q:
        raise ShapeError("embed_pair needs two distinct factors")
    dp, dq = shape.dims[p], shape.dims[q]
    if op.shape != (dp * dq, dp * dq):
        raise ShapeError(f"operator of shape {op.shape} on factors of dims {dp}, {dq}")
    mode = mode_of(op)
    D = shape.total
    idx = _multi_indices(shape)
    strides = np.array([prod(shape.dims[k + 1 :]) for k in range(len(shape))])
    out = mode.zeros((D, D))
    rows, cols = np.nonzero(op)
    # column state s has local pair (s_p, s_q); op maps it to (r_p, r_q)
    for col_state in range(D):
        sp, sq = idx[col_state, p], idx[col_state, q]
        local_col = sp * dq + sq
        base = col_state - sp * strides[p] - sq * strides[q]
        for r, c in zip(rows, cols):
            if c != local_col:
                continue
            rp, rq = divmod(r, dq)
            out[base + rp * strides[p] + rq * strides[q], col_state] += op[r, c]
    return out


def permutation_op(N: int, mode: FieldMode = EXACT):
    """P = sum_ij E^{ij} (x) E^{ji}, the swap on C^N (x) C^N."""
    out = mode.zeros((N * N, N * N))
    for i in range(N):
        for j in range(N):
            out[i * N + j, j * N + i] = mode.one
    return out


def swap_op(shape, p: int, q: int, mode: FieldMode = EXACT):
    """Permutation operator exchanging factors p and q of equal dimension."""
    shape = _shape(shape)
    N = shape.dims[p]
    if shape.dims[q] != N:
        raise ShapeError("can only swap factors of equal dimension")
    return embed_pair(permutation_op(N, mode), shape, p, q)


def multi_trace_element(X, indices, n: int | None = None):
    """tr(X E^{i1 j1} (x) ... (x) E^{im jm}) read off as a single entry of X.

    The trace equals the matrix element of X at row (j_1..j_m) and column
    (i_1..i_m), labels 1-based.
    """
    m = len(indices)
    D = X.shape[0]
    if n is None:
        n = round(D ** (1.0 / m)) if m else 1
    if n**m != D:
        raise ShapeError(f"operator of dimension {D} is not on {m} factors of dim {n}")
    row = col = 0
    for i, j in indices:
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"pair ({i}, {j}) out of range 1..{n}")
        row = row * n + (j - 1)
        col = col * n + (i - 1)
    return X[row, col]


def matmul(a, b):
    """Matrix product; exact operands use a sparsity-aware row expansion."""
    if a.dtype != object and b.dtype != object:
        return a @ b
    if b.ndim == 1:
        return apply(a, b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    if np.count_nonzero(a) > 0.3 * a.size and np.count_nonzero(b) > 0.3 * b.size:
        return a.dot(b)
    out = EXACT.zeros((a.shape[0], b.shape[1]))
    b_rows = [np.flatnonzero(b[k]) for k in range(b.shape[0])]
    rows, cols = np.nonzero(a)
    for i, k in zip(rows, cols):
        nz = b_rows[k]
        if len(nz):
            out[i, nz] += a[i, k] * b[k, nz]
    return out


def apply(a, x):
    """Operator-vector product, skipping zero vector components."""
    if a.dtype != object and x.dtype != object:
        return a @ x
    if a.shape[1] != x.shape[0]:
        raise ShapeError(f"cannot apply {a.shape} to vector of length {x.shape[0]}")
    out = EXACT.zeros(a.shape[0])
    for k in np.flatnonzero(x):
        col = a[:, k]
        nz = np.flatnonzero(col)
        if len(nz):
            out[nz] += col[nz] * x[k]
    return out


def matmul_chain(*ops):
    return reduce(matmul, ops)


def commutator(a, b):
    return matmul(a, b) - matmul(b, a)


def trace(a):
    return sum(a[k, k] for k in range(a.shape[0]))


def to_complex(arr):
    return np.asarray(arr, dtype=np.complex128)


def op_to_json(op, dims) -> dict:
    return {
        "shape": list(_shape(dims).dims),
        "entries": [[encode_scalar(x) for x in row] for row in op],
    }


def vec_to_json(vec, dims) -> dict:
    return {"shape": list(_shape(dims).dims), "entries": [encode_scalar(x) for x in vec]}


def _decode(items, mode):
    vals = [decode_scalar(x) for x in items]
    exact = all(isinstance(v, type(mpq(0))) for v in vals)
    if mode is not None:
        exact = mode.exact
        vals = [mode.scalar(v) if exact else complex(v) for v in vals]
    arr = np.empty(len(vals), dtype=object)
    arr[:] = vals
    return arr if exact else arr.astype(np.complex128)


def op_from_json(obj, mode: FieldMode | None = None):
    shape = SpaceShape(tuple(obj["shape"]))
    rows = obj["entries"]
    if len(rows) != shape.total or any(len(r) != shape.total for r in rows):
        raise ShapeError(f"entries do not form a {shape.total}x{shape.total} matrix")
    arr = _decode([x for row in rows for x in row], mode)
    return arr.reshape(shape.total, shape.total), shape


def vec_from_json(obj, mode: FieldMode | None = None):
    shape = SpaceShape(tuple(obj["shape"]))
    if len(obj["entries"]) != shape.total:
        raise ShapeError(f"vector of length {len(obj['entries'])} does not match {shape.dims}")
    return _decode(obj["entries"], mode), shape


def partial_transpose(op, shape, site: int):
    """Transpose ``op`` in factor ``site`` only."""
    shape = _shape(shape)
    dims = shape.dims
    m = len(dims)
    t = op.reshape(dims + dims)
    axes = list(range(2 * m))
    axes[site], axes[m + site] = axes[m + site], axes[site]
    return t.transpose(axes).reshape(shape.total, shape.total)
