import json

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import all_zero, distinct_rationals
from naba.bethe import BetheConfig
from naba.errors import ShapeError, SingularTwist
from naba.monodromy import ChainSpec
from naba.scalars import f_fn
from naba.spectrum import (
    BetheRoots,
    SolveOptions,
    action_residual,
    bethe_residuals,
    exact_diag,
    gl2_action_check,
    gl2_onshell_root,
    inverse_problem_check,
    solve_bethe,
    tau_eval,
    transfer_matrix,
    twisted_gl2_onshell_check,
    verify_onshell,
)
from naba.tensor import commutator

TWIST = (mpq(1), mpq(2), mpq(3))


@st.composite
def action_cases(draw, max_ab=3, Lmax=3):
    a = draw(st.integers(0, max_ab))
    b = draw(st.integers(0, min(max_ab - a, a + 1)))
    L = draw(st.integers(1, Lmax))
    xs = draw(distinct_rationals(L + a + b + 1))
    twist = TWIST if draw(st.booleans()) else None
    spec = ChainSpec(3, L, 1, xs[:L], twist)
    return spec, BetheConfig(xs[L : L + a], xs[L + a : L + a + b]), xs[-1]


@given(distinct_rationals(4))
def test_transfer_matrices_commute(xs):
    spec = ChainSpec(3, 2, 1, xs[:2], TWIST)
    assert all_zero(commutator(transfer_matrix(spec, xs[2]), transfer_matrix(spec, xs[3])))


@given(action_cases())
def test_complete_action_residual_vanishes_off_shell(case):
    spec, cfg, z = case
    assert all_zero(action_residual(spec, cfg, z))


def _nested_onshell_21(u1, v):
    # kappa_2 f(v,u1) f(v,u2) = kappa_3 solved for u2
    r = (TWIST[2] / TWIST[1]) / f_fn(v, u1, 1)
    return v - 1 / (r - 1)


def test_three_term_action_needs_nested_bethe_equations():
    spec = ChainSpec(3, 2, 1, (0, mpq(1, 3)), TWIST)
    u, z = mpq(-2, 7), mpq(5, 4)
    onshell = BetheConfig((u,), (u + 2,))
    assert all_zero(action_residual(spec, onshell, z, complete=False))
    offshell = BetheConfig((u,), (u + mpq(3, 2),))
    assert not all_zero(action_residual(spec, offshell, z, complete=False))


def test_phi_variant_must_swap_the_nested_state():
    spec = ChainSpec(3, 3, 1, (0, mpq(1, 3), mpq(-3, 2)), TWIST)
    u1, v, z = mpq(2, 5), mpq(7, 3), mpq(-1, 6)
    cfg = BetheConfig((u1, _nested_onshell_21(u1, v)), (v,))
    assert all_zero(action_residual(spec, cfg, z, complete=False))
    assert not all_zero(action_residual(spec, cfg, z, complete=False, keep_F=True))


def test_untwisted_single_excitation_has_one_root():
    w = mpq(3, 2)
    spec = ChainSpec(3, 2, 1, (0, w))
    roots = solve_bethe(spec, 1, 0, SolveOptions(starts=16, seed=3))
    assert len(roots) == 1
    assert abs(roots[0].ubar[0] - complex((w - 1) / 2)) < 1e-10


def test_bethe_residuals_exact_root():
    w = mpq(3, 2)
    spec = ChainSpec(3, 2, 1, (0, w))
    res = bethe_residuals(spec, BetheConfig(((w - 1) / 2,), ()))
    assert all_zero(res)
    with pytest.raises(ShapeError):
        bethe_residuals(ChainSpec(2, 2, 1, (0, w)), BetheConfig((mpq(1),), (mpq(2),)))


def test_onshell_roots_are_eigenvectors():
    spec = ChainSpec(3, 2, 1, (0, mpq(1, 3)), ("1", "2", "3"))
    roots = solve_bethe(spec, 1, 1, SolveOptions(starts=32, seed=1))
    assert roots
    for r in roots:
        assert r.residual_norm < 1e-10
        for rep in verify_onshell(spec, r, [0.2, 0.4, 3.0]):
            assert rep.eig_error < 1e-10
            assert rep.ed_match_index is not None


def test_solver_is_deterministic():
    spec = ChainSpec(3, 2, 1, (0, mpq(1, 3)), TWIST)
    opts = SolveOptions(starts=16, seed=5)
    a = [r.to_json() for r in solve_bethe(spec, 1, 1, opts)]
    b = [r.to_json() for r in solve_bethe(spec, 1, 1, opts)]
    assert json.dumps(a) == json.dumps(b)


def test_roots_json_roundtrip():
    r = BetheRoots((0.25 + 0.5j,), (1.5 - 2j,), 1e-14)
    back = BetheRoots.from_json(json.loads(json.dumps(r.to_json())))
    assert back.ubar == r.ubar and back.vbar == r.vbar


def test_eigenvalue_in_exact_spectrum():
    spec = ChainSpec(3, 2, 1, (0, mpq(1, 3)), TWIST)
    z = 0.7
    ed = exact_diag(spec, z)
    tau = tau_eval(z, BetheConfig((), ()), spec.to_float())
    assert np.min(np.abs(np.asarray(ed) - tau)) < 1e-10


@given(st.integers(0, 2), st.data())
def test_gl2_action_formula(n, data):
    xs = data.draw(distinct_rationals(3 + n))
    spec = ChainSpec(2, 2, 1, xs[:2])
    assert all_zero(gl2_action_check(spec, xs[2 : 2 + n], xs[-1]))
    assert all_zero(gl2_action_check(spec, xs[2 : 2 + n], xs[0], polynomial=True))


def test_gl2_action_sign_matters():
    spec = ChainSpec(2, 2, 1, (0, mpq(1, 3)))
    assert not all_zero(gl2_action_check(spec, (mpq(5, 2),), mpq(-4, 3), literal_sign=True))


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("k", [1, 2])
def test_inverse_problem(N, k):
    spec = ChainSpec(N, 2, 1, (mpq(1, 4), mpq(-2, 3)))
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            assert all_zero(inverse_problem_check(spec, k, i, j))


def test_exact_gl2_onshell_root():
    spec = ChainSpec(2, 2, 1, (0, mpq(1, 3)))
    assert gl2_onshell_root(spec) == mpq(-1, 3)


@pytest.mark.parametrize("K", [[[1, 0], [0, 1]], [[1, 1], [0, 1]], [[2, -1], [1, 3]]])
def test_twisted_gl2_onshell(K):
    spec = ChainSpec(2, 2, 1, (0, mpq(1, 3)))
    rep = twisted_gl2_onshell_check(spec, K, [gl2_onshell_root(spec)])
    assert rep.eig_error < 1e-10


def test_twist_with_vanishing_corner_rejected():
    spec = ChainSpec(2, 2, 1, (0.0, 1 / 3))
    with pytest.raises(SingularTwist):
        twisted_gl2_onshell_check(spec, [[0, 1], [1, 0]], [0.1])
