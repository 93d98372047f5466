"""Scalar fields and the elementary rational functions g and f.

Two fields are supported.  Exact mode stores rationals as ``gmpy2.mpq``
(always in lowest terms, sign on the numerator).  Float mode uses Python
``complex``.  Every function below is generic: the result lives in the
exact field when all inputs are exact and in the float field otherwise.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from gmpy2 import mpq

from .errors import ParamError, PoleError

FLOAT_POLE_THRESHOLD = 1e-14
DEFAULT_TOL = 1e-10
SOLVER_TOL = 1e-12

_EXACT_TYPES = (int, np.integer, Fraction, type(mpq(0)))


def is_exact(x) -> bool:
    return isinstance(x, _EXACT_TYPES) and not isinstance(x, bool)


def coerce(x):
    """Promote exact inputs to ``mpq`` and numeric inputs to ``complex``."""
    if isinstance(x, type(mpq(0))):
        return x
    if isinstance(x, (int, np.integer, Fraction)) and not isinstance(x, bool):
        return mpq(int(x)) if not isinstance(x, Fraction) else mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, numbers.Number):
        return complex(x)
    raise ParamError(f"not a scalar: {x!r}")


def parse_rational(text: str):
    try:
        return mpq(text.strip())
    except ValueError as exc:
        raise ParamError(f"cannot parse rational {text!r}") from exc


def _flatten(values):
    for v in values:
        if isinstance(v, (list, tuple, np.ndarray)):
            yield from _flatten(v)
        elif v is not None:
            yield v


@dataclass(frozen=True)
class FieldMode:
    """Field selector with the equality rule used by identity checks."""

    mode: str = "exact"
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise ParamError(f"unknown field mode {self.mode!r}")
        if self.tol < 0:
            raise ParamError("tolerance must be non-negative")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def dtype(self):
        return object if self.exact else np.complex128

    @property
    def one(self):
        return mpq(1) if self.exact else 1.0 + 0j

    @property
    def zero(self):
        return mpq(0) if self.exact else 0j

    def scalar(self, x):
        """Convert ``x`` into this field."""
        if self.exact:
            if isinstance(x, str):
                return parse_rational(x)
            if not is_exact(x):
                raise ParamError(f"{x!r} is not an exact rational")
            return coerce(x)
        if isinstance(x, str):
            return complex(parse_rational(x))
        return complex(x)

    def zeros(self, shape):
        if self.exact:
            out = np.empty(shape, dtype=object)
            out.fill(mpq(0))
            return out
        return np.zeros(shape, dtype=np.complex128)

    def eye(self, n: int):
        out = self.zeros((n, n))
        for k in range(n):
            out[k, k] = self.one
        return out

    def asarray(self, data):
        arr = np.asarray(data, dtype=object)
        if self.exact:
            return np.vectorize(self.scalar, otypes=[object])(arr) if arr.size else arr
        return np.asarray(np.vectorize(complex, otypes=[np.complex128])(arr), dtype=np.complex128)

    def equal(self, x, y) -> bool:
        if self.exact:
            return x == y
        return abs(x - y) <= self.tol * max(1.0, abs(x), abs(y))

    def is_zero(self, arr, scale=None) -> bool:
        """True when every entry vanishes (exactly, or relative to ``scale``)."""
        arr = np.asarray(arr)
        if self.exact and arr.dtype == object:
            return not any(arr.ravel())
        return max_abs(arr) <= self.tol * max(1.0, scale or 0.0)


EXACT = FieldMode("exact")
FLOAT = FieldMode("float", DEFAULT_TOL)


def field_of(*values) -> FieldMode:
    """Exact mode iff every scalar among ``values`` (nested allowed) is exact."""
    for v in _flatten(values):
        if isinstance(v, np.ndarray):
            continue
        if not is_exact(v) and not isinstance(v, str):
            return FLOAT
    return EXACT


def max_abs(arr) -> float:
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0.0
    if arr.dtype == object:
        return float(max(abs(complex(x)) for x in arr.ravel()))
    return float(np.max(np.abs(arr)))


def is_pole(d) -> bool:
    if is_exact(d):
        return d == 0
    return abs(d) <= FLOAT_POLE_THRESHOLD


def g_fn(x, y, c):
    """g(x, y) = c / (x - y)."""
    x, y, c = coerce(x), coerce(y), coerce(c)
    d = x - y
    if is_pole(d):
        raise PoleError(f"g has a pole at x = y = {x}")
    return c / d


def f_fn(x, y, c):
    """f(x, y) = (x - y + c) / (x - y) = 1 + g(x, y)."""
    x, y, c = coerce(x), coerce(y), coerce(c)
    d = x - y
    if is_pole(d):
        raise PoleError(f"f has a pole at x = y = {x}")
    return (d + c) / d


def _as_set(x) -> list:
    if isinstance(x, (list, tuple, np.ndarray)):
        return list(x)
    return [x]


def prod_fn(kind: str, xs, ys, c):
    """Double product of g or f over all pairs (x, y) with x in xs, y in ys.

    Either argument may be a single scalar.  An empty set gives 1.
    """
    fn = {"g": g_fn, "f": f_fn}.get(kind)
    if fn is None:
        raise ParamError(f"kind must be 'g' or 'f', got {kind!r}")
    xs, ys = _as_set(xs), _as_set(ys)
    out = field_of(xs, ys, c).one
    for x in xs:
        for y in ys:
            try:
                out = out * fn(x, y, c)
            except PoleError as exc:
                raise PoleError(f"{kind}({x}, {y}): coinciding pair") from exc
    return out


def f_prod(xs, ys, c):
    return prod_fn("f", xs, ys, c)


def g_prod(xs, ys, c):
    return prod_fn("g", xs, ys, c)


def product(values: Iterable, start=None):
    out = start
    for v in values:
        out = v if out is None else out * v
    return mpq(1) if out is None else out


def encode_scalar(x):
    """JSON encoding: "p/q" (or "p") for rationals, [re, im] for complex."""
    if is_exact(x):
        return str(coerce(x))
    z = complex(x)
    return [z.real, z.imag]


def decode_scalar(obj, mode: FieldMode | None = None):
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ParamError(f"complex scalars are [re, im], got {obj!r}")
        val = complex(float(obj[0]), float(obj[1]))
    elif isinstance(obj, str):
        val = parse_rational(obj)
    elif isinstance(obj, bool):
        raise ParamError("booleans are not scalars")
    elif isinstance(obj, int):
        val = mpq(obj)
    elif isinstance(obj, float):
        val = complex(obj)
    else:
        raise ParamError(f"cannot decode scalar {obj!r}")
    return mode.scalar(val) if mode is not None else val


def to_float(x):
    return complex(x)
