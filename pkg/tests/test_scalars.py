import json

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from naba.errors import ParamError, PoleError
from naba.scalars import (
    EXACT,
    FLOAT,
    FieldMode,
    coerce,
    decode_scalar,
    encode_scalar,
    f_fn,
    f_prod,
    field_of,
    g_fn,
    g_prod,
    is_exact,
    parse_rational,
)


def test_g_and_f_worked_values():
    assert g_fn(3, 1, 2) == 1
    assert f_fn(3, 1, 2) == 2
    assert is_exact(g_fn(3, 1, 2))


def test_g_pole_raises():
    with pytest.raises(PoleError):
        g_fn(mpq(1, 3), mpq(1, 3), 1)
    with pytest.raises(PoleError):
        f_fn(0.5, 0.5, 1.0)


@given(rationals(), rationals(), rationals(nonzero=True))
def test_f_is_one_plus_g(x, y, c):
    if x == y:
        return
    assert f_fn(x, y, c) == 1 + g_fn(x, y, c)
    assert g_fn(x, y, c) == -g_fn(y, x, c)


@given(rationals(), rationals(), rationals(nonzero=True))
def test_float_field_tracks_exact(x, y, c):
    if x == y:
        return
    exact = g_fn(x, y, c)
    approx = g_fn(complex(x), complex(y), complex(c))
    assert isinstance(approx, complex)
    assert abs(approx - complex(exact)) <= 1e-12 * max(1.0, abs(approx))


def test_products_over_sets():
    xs, ys = (mpq(1), mpq(2)), (mpq(5),)
    assert f_prod(xs, ys, 1) == f_fn(1, 5, 1) * f_fn(2, 5, 1)
    assert g_prod((), ys, 1) == 1
    with pytest.raises(PoleError):
        f_prod(xs, (mpq(2),), 1)


@given(rationals())
def test_encode_roundtrip_exact(x):
    text = json.dumps(encode_scalar(x))
    assert decode_scalar(json.loads(text)) == x


@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e6))
def test_encode_roundtrip_float(z):
    assert decode_scalar(json.loads(json.dumps(encode_scalar(z)))) == z


def test_decode_rejects_bad_input():
    with pytest.raises(ParamError):
        decode_scalar(True)
    with pytest.raises(ParamError):
        decode_scalar([1.0])
    with pytest.raises(ParamError):
        parse_rational("one half")


def test_coercion_and_field_detection():
    assert coerce("3/4") == mpq(3, 4)
    assert coerce(2) == mpq(2)
    assert isinstance(coerce(0.5), complex)
    assert field_of(mpq(1), 2, [mpq(1, 3)]).exact
    assert not field_of(mpq(1), 0.5).exact


def test_field_mode_zero_checks():
    assert EXACT.is_zero(EXACT.zeros((2, 2)))
    assert not EXACT.is_zero(EXACT.eye(2))
    assert FLOAT.is_zero(np.full(3, 1e-12))
    assert not FieldMode("float", 1e-14).is_zero(np.full(3, 1e-12))
