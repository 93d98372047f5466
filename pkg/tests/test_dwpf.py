
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import distinct_rationals
from naba.dwpf import (
    DwpfInput,
    det,
    dwpf,
    dwpf_det,
    dwpf_k2_expansion,
    dwpf_recursive,
    dwpf_residue_check,
    residue_prediction,
)
from naba.errors import ParamError, PoleError
from naba.scalars import g_fn


@st.composite
def dw_inputs(draw, nmax=4):
    n = draw(st.integers(1, nmax))
    xs = draw(distinct_rationals(2 * n))
    return xs[:n], xs[n:]


def test_k2_worked_value():
    v, u = (mpq(0), mpq(1, 2)), (mpq(2), mpq(3))
    assert dwpf(v, u, 1) == mpq(4, 15)
    assert dwpf_k2_expansion(v, u, 1) == mpq(4, 15)


def test_k0_and_k1():
    assert dwpf((), (), 1) == 1
    assert dwpf((mpq(2),), (mpq(1, 3),), mpq(1, 2)) == g_fn(2, mpq(1, 3), mpq(1, 2))


def test_bareiss_determinant():
    m = [[mpq(2), mpq(1), mpq(3)], [mpq(0), mpq(0), mpq(1)], [mpq(1, 2), mpq(4), mpq(1)]]
    # cofactor expansion along the second row
    assert det(m) == -(2 * 4 - mpq(1) * mpq(1, 2))
    assert det([[mpq(1), mpq(2)], [mpq(2), mpq(4)]]) == 0


@given(dw_inputs())
def test_determinant_matches_recursion(vu):
    v, u = vu
    inp = DwpfInput(v, u, 1)
    assert dwpf_det(inp) == dwpf_recursive(inp)


@given(dw_inputs(nmax=3), st.data())
def test_symmetric_in_each_set(vu, data):
    v, u = vu
    perm = data.draw(st.permutations(range(len(v))))
    ref = dwpf(v, u, 1)
    assert dwpf([v[k] for k in perm], u, 1) == ref
    assert dwpf(v, [u[k] for k in perm], 1) == ref


@given(dw_inputs())
def test_reflection(vu):
    v, u = vu
    assert dwpf([-x for x in v], [-x for x in u], 1) == dwpf(u, v, 1)


@given(dw_inputs())
def test_residue_exact(vu):
    v, u = vu
    assert dwpf_residue_check(DwpfInput(v, u, 1)) == 0


def test_residue_float_extrapolation():
    v, u = (mpq(0), mpq(1, 3), mpq(-5, 2)), (mpq(2), mpq(7, 4), mpq(9))
    inp = DwpfInput(v, u, 1)
    ref = abs(complex(residue_prediction(inp)))
    assert abs(dwpf_residue_check(inp, numeric=True)) <= 1e-6 * max(1.0, ref)


def test_float_mode_agrees():
    v, u = (0.0, 0.5, 1.7), (2.0, 3.0, -1.2)
    a, b = dwpf_det(DwpfInput(v, u, 1.0)), dwpf_recursive(DwpfInput(v, u, 1.0))
    assert abs(a - b) <= 1e-12 * abs(a)


def test_input_validation():
    with pytest.raises(ParamError):
        DwpfInput((mpq(1),), (mpq(1), mpq(2)), 1)
    with pytest.raises(PoleError):
        DwpfInput((mpq(1), mpq(1)), (mpq(2), mpq(3)), 1)
    with pytest.raises(PoleError):
        dwpf((mpq(1),), (mpq(2),), 1)
