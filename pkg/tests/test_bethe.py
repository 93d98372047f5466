from itertools import permutations

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import all_zero, distinct_rationals
from naba.bethe import (
    METHODS,
    BetheConfig,
    apply_ops,
    automorphism_bv_check,
    bethe_vector,
    bv_nested,
    bv_partition,
    bv_trace,
    commutation_identity_check,
    composite_bv_check,
    gl2_bethe_vector,
    partitions,
)
from naba.errors import ParamError, PoleError, ShapeError
from naba.monodromy import ChainModel, ChainSpec, coloring_projector
from naba.scalars import g_fn
from naba.tensor import apply

SPEC = ChainSpec(3, 2, 1, (0, mpq(1, 3)))


@st.composite
def bethe_cases(draw, amax=2, bmax=2, Lmax=3, N=3, twisted=False):
    a = draw(st.integers(0, amax))
    b = draw(st.integers(0, min(bmax, a + 1)))
    L = draw(st.integers(1, Lmax))
    xs = draw(distinct_rationals(L + a + b))
    twist = (mpq(1), mpq(2), mpq(-3, 2)) if twisted else None
    spec = ChainSpec(N, L, 1, xs[:L], twist)
    return spec, BetheConfig(xs[L : L + a], xs[L + a :])


def test_psi11_frozen_values():
    # independent Kronecker-product construction of T12(u)T23(v)|0> + g(v,u) lambda_2(v) T13(u)|0>
    expected = np.zeros(9, dtype=object)
    expected[:] = mpq(0)
    expected[2], expected[6] = mpq(36, 11), mpq(84, 11)
    cfg = BetheConfig((mpq(1, 2),), (mpq(7, 3),))
    for name in METHODS:
        assert all_zero(bethe_vector(SPEC, cfg, name) - expected), name


def test_psi11_literal():
    spec = ChainSpec(3, 3, 1, (mpq(-1, 2), mpq(2), mpq(4, 3)), (2, 1, mpq(3, 5)))
    model = ChainModel(spec)
    u, v = mpq(1, 7), mpq(-5, 3)
    vac = model.vacuum()
    literal = apply_ops(model, [(1, 2, u), (2, 3, v)], vac) + g_fn(v, u, 1) * model.lam(2, v) * apply_ops(
        model, [(1, 3, u)], vac
    )
    for name in METHODS:
        assert all_zero(bethe_vector(model, BetheConfig((u,), (v,)), name) - literal), name


@given(bethe_cases())
def test_all_constructions_agree(case):
    spec, cfg = case
    model = ChainModel(spec)
    ref = bv_partition(model, cfg)
    for name, fn in METHODS.items():
        assert all_zero(fn(model, cfg) - ref), name
    assert all_zero(bv_trace(model, cfg, index_set=(1, 2, 3)) - ref)


@given(bethe_cases(amax=1, bmax=1, twisted=True))
def test_constructions_agree_with_twist(case):
    spec, cfg = case
    model = ChainModel(spec)
    ref = bv_nested(model, cfg)
    for name, fn in METHODS.items():
        assert all_zero(fn(model, cfg) - ref), name


@given(bethe_cases(amax=2, bmax=2, Lmax=2))
def test_symmetric_in_each_set(case):
    spec, cfg = case
    model = ChainModel(spec)
    ref = bv_nested(model, cfg)
    for pu in permutations(cfg.ubar):
        for pv in permutations(cfg.vbar):
            assert all_zero(bv_nested(model, BetheConfig(pu, pv)) - ref)


@given(bethe_cases(amax=3, bmax=3, Lmax=3))
def test_vector_lies_in_its_weight_sector(case):
    spec, cfg = case
    if cfg.b > cfg.a:
        return
    psi = bv_partition(spec, cfg)
    P = coloring_projector(spec, cfg.a, cfg.b)
    assert all_zero(apply(P, psi) - psi)


def test_more_v_than_u_vanishes():
    assert all_zero(bv_partition(SPEC, BetheConfig((), (mpq(1, 2),))))
    assert all_zero(bv_nested(SPEC, BetheConfig((mpq(5),), (mpq(1, 2), mpq(-2)))))


def test_lowering_then_raising_color_annihilates_vacuum():
    model = ChainModel(ChainSpec(3, 3, 1, (0, mpq(1, 2), mpq(-4, 3))))
    assert all_zero(apply_ops(model, [(3, 2, mpq(7, 2)), (1, 2, mpq(2, 9))], model.vacuum()))


def test_float_mode_matches_exact():
    cfg = BetheConfig((mpq(1, 2), mpq(-3)), (mpq(7, 3),))
    exact = bv_partition(SPEC, cfg)
    approx = bv_partition(SPEC.to_float(), BetheConfig(tuple(map(complex, cfg.ubar)), (complex(cfg.vbar[0]),)))
    assert approx.dtype == np.complex128
    assert np.allclose(exact.astype(complex), approx, atol=1e-12)


def test_partitions_enumerate_all_splits():
    parts = list(partitions(2, 1))
    # n = 0: one split; n = 1: two choices of u times one of v
    assert len(parts) == 3
    assert len(set(map(repr, parts))) == len(parts)


@given(st.lists(st.integers(-30, 30), min_size=3, max_size=3, unique=True))
def test_gl2_creation_operators_commute(ks):
    spec = ChainSpec(2, 3, 1, (mpq(1, 2), mpq(5, 3), mpq(-7, 2)))
    us = tuple(mpq(k, 11) for k in ks)
    ref = gl2_bethe_vector(spec, us)
    for order in permutations(range(3)):
        assert all_zero(gl2_bethe_vector(spec, us, order) - ref)


@given(st.sampled_from([(1, 1), (2, 1), (1, 2)]), st.integers(2, 3), st.data())
def test_operator_identity(shape, L, data):
    a, b = shape
    xs = data.draw(distinct_rationals(L + a + b))
    spec = ChainSpec(3, L, 1, xs[:L])
    assert all_zero(commutation_identity_check(spec, xs[L : L + a], xs[L + a :]))


@given(st.sampled_from([(1, 1), (2, 1)]), st.integers(2, 3), st.data())
def test_automorphism_image(shape, L, data):
    a, b = shape
    xs = data.draw(distinct_rationals(L + a + b))
    spec = ChainSpec(3, L, 1, xs[:L])
    if {-x for x in xs[L:]} & set(xs[:L]):
        return
    assert all_zero(automorphism_bv_check(spec, (xs[L : L + a], xs[L + a :])))


@given(st.integers(0, 2), st.sampled_from([1, 2]), st.data())
def test_composite_expansion(n, cut, data):
    xs = data.draw(distinct_rationals(3 + n))
    spec = ChainSpec(2, 3, 1, xs[:3], (mpq(2), mpq(-1, 3)))
    assert all_zero(composite_bv_check(spec, cut, xs[3:]))


def test_config_validation():
    with pytest.raises(PoleError):
        BetheConfig((mpq(1), mpq(1)), ())
    with pytest.raises(PoleError):
        BetheConfig((mpq(1),), (mpq(1),))
    with pytest.raises(ShapeError):
        gl2_bethe_vector(SPEC, (mpq(1),))
    with pytest.raises(ParamError):
        bethe_vector(SPEC, BetheConfig((), ()), "bogus")
