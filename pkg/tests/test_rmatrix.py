import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import all_zero, distinct_rationals, rationals
from naba.errors import CommutationError, ParamError, PoleError
from naba.rmatrix import (
    RMatrixKind,
    check_gln_invariance,
    check_mixed_rtt,
    check_ybe,
    conjugated_R,
    k_matrix,
    q_deformed_R,
    rational_R,
)
from naba.scalars import EXACT, g_fn
from naba.tensor import matmul

Q_VALUES = st.sampled_from([mpq(3), mpq(-2, 5), mpq(7, 3), mpq(1, 4)])


@given(st.sampled_from([2, 3, 4]), distinct_rationals(3))
def test_rational_ybe(N, us):
    assert all_zero(check_ybe(lambda u, v: rational_R(N, u, v, 1), *us))


@given(st.sampled_from([2, 3]), distinct_rationals(3, avoid=[0]), Q_VALUES)
def test_qdeformed_ybe(N, us, q):
    assert all_zero(check_ybe(RMatrixKind("qdeformed", N, q=q).builder(), *us))


def _square_distinct(draw_us):
    return len({x * x for x in draw_us}) == len(draw_us)


@given(distinct_rationals(3, avoid=[0]), Q_VALUES)
def test_conjugated_ybe_n3(ss, q):
    if not _square_distinct(ss):
        return
    assert all_zero(check_ybe(RMatrixKind("conjugated", 3, q=q).builder(), *ss))


@given(distinct_rationals(3, avoid=[0]), Q_VALUES)
def test_trig_n2_satisfies_ybe(ss, q):
    if not _square_distinct(ss):
        return
    assert all_zero(check_ybe(RMatrixKind("trig2", 2, q=q).builder(), *ss))


def test_symmetric_trig_ansatz_fails_beyond_n2():
    ss = (mpq(2), mpq(-1, 3), mpq(5, 2))
    res = check_ybe(RMatrixKind("naive_trig", 3, q=mpq(3)).builder(), *ss)
    assert not all_zero(res)


@given(distinct_rationals(2), rationals(nonzero=True))
def test_unitarity(uv, c):
    u, v = uv
    prod = matmul(rational_R(3, u, v, c), rational_R(3, v, u, c))
    assert all_zero(prod - (1 - g_fn(u, v, c) ** 2) * EXACT.eye(9))


@given(distinct_rationals(2), st.lists(rationals(), min_size=4, max_size=4))
def test_gln_invariance(uv, entries):
    G = np.array(entries, dtype=object).reshape(2, 2)
    R = rational_R(2, *uv, 1)
    assert all_zero(check_gln_invariance(R, G))
    assert all_zero(check_gln_invariance(R, G, linearized=True))


@given(distinct_rationals(3))
def test_mixed_rtt(uvw):
    assert all_zero(check_mixed_rtt(*uvw, 1))


def test_rational_r_at_pole():
    with pytest.raises(PoleError):
        rational_R(2, 1, 1, 1)
    with pytest.raises(PoleError):
        q_deformed_R(2, mpq(2), mpq(2), mpq(3))


def test_parameter_validation():
    with pytest.raises(ParamError):
        RMatrixKind("rational", 2, c=0)
    with pytest.raises(ParamError):
        RMatrixKind("qdeformed", 2, q=1)
    with pytest.raises(ParamError):
        RMatrixKind("unknown")
    with pytest.raises(ParamError):
        k_matrix(2, mpq(2), mpq(1))


def test_conjugation_checks_inputs():
    R = q_deformed_R(3, mpq(4), mpq(9), mpq(3))
    K = k_matrix(3, mpq(2), mpq(3))
    with pytest.raises(ParamError):
        conjugated_R(R, K, K)
    # a unipotent X does not commute with R through X (x) X
    X, Xi = EXACT.eye(3), EXACT.eye(3)
    X[0, 1], Xi[0, 1] = mpq(1), mpq(-1)
    with pytest.raises(CommutationError):
        conjugated_R(R, X, Xi)
