"""Verification suites: seeded case generation and per-case checks.

A suite expands its parameters into a list of JSON-serializable cases; each
case names a check and carries its inputs.  ``run_case`` evaluates one case
and returns ``{"inputs", "metric", "pass"}``.  Exact-mode checks pass only on
an identically zero residual; float-mode checks compare the largest entry
against ``tol`` scaled by the size of the terms being compared.
"""

from __future__ import annotations

import cmath
import json
from importlib import resources
from itertools import permutations

import numpy as np
from gmpy2 import mpq

from . import bethe, dwpf, monodromy, rmatrix, spectrum
from .errors import ConfigError
from .scalars import DEFAULT_TOL, FieldMode, decode_scalar, encode_scalar, g_fn, max_abs
from .tensor import apply

SUITES = (
    "ybe", "rtt", "coloring", "dwpf", "bv-equivalence", "action", "commutation-identity",
    "composite", "automorphism", "gl2-extras", "solve-verify",
)


def load_defaults() -> dict:
    text = resources.files("naba").joinpath("defaults.json").read_text()
    return json.loads(text)


# ------------------------------------------------------------------ draws


def draw_rationals(rng, n, c=1, avoid=(), num=20, den=9):
    """n rationals p/q with no pairwise (or ``avoid``) difference in {0, c, -c}."""
    c = mpq(c)
    out = []
    while len(out) < n:
        x = mpq(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))
        if all(x - y not in (0, c, -c) for y in list(avoid) + out):
            out.append(x)
    return out


def _enc(xs):
    return [encode_scalar(x) for x in xs]


def _dec(xs, mode: FieldMode):
    vals = [decode_scalar(x) for x in xs]
    return tuple(complex(v) for v in vals) if not mode.exact else tuple(vals)


def _spec(obj, mode: FieldMode) -> monodromy.ChainSpec:
    spec = monodromy.ChainSpec.from_json(obj)
    return spec if mode.exact else spec.to_float()


def _random_chain(rng, N, L, twist=None, avoid=()):
    xi = draw_rationals(rng, L, 1, avoid)
    return {"N": N, "L": L, "c": "1", "xi": _enc(xi), "twist": None if twist is None else _enc(twist)}, xi


def _rng(seed, suite, k):
    return np.random.default_rng([seed, SUITES.index(suite), k])


# -------------------------------------------------------------- generators


def gen_ybe(p, seed):
    cases = []
    for k, (kind, N) in enumerate(p["kinds"]):
        for t in range(p["trials"]):
            rng = _rng(seed, "ybe", 100 * k + t)
            us = draw_rationals(rng, 3, 1, avoid=[0])
            # square-root parametrized kinds need s_i^2 pairwise distinct
            while len({x * x for x in us}) < 3:
                us = draw_rationals(rng, 3, 1, avoid=[0])
            q = draw_rationals(rng, 1, 1, avoid=[0, 1, -1, 2, -2])[0]
            expect_zero = not (kind == "naive_trig" and N > 2)
            cases.append({"check": "ybe", "kind": kind, "N": N, "c": "1", "q": encode_scalar(q),
                          "args": _enc(us), "expect_zero": expect_zero})
    for N in p["gln_N"]:
        for t in range(p["trials"]):
            rng = _rng(seed, "ybe", 10_000 + 100 * N + t)
            u, v = draw_rationals(rng, 2, 1)
            G = [[encode_scalar(mpq(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))) for _ in range(N)]
                 for _ in range(N)]
            cases.append({"check": "gln", "N": N, "c": "1", "args": _enc([u, v]), "G": G})
    for t in range(p["trials"]):
        rng = _rng(seed, "ybe", 20_000 + t)
        cases.append({"check": "mixed-rtt", "c": "1", "args": _enc(draw_rationals(rng, 3, 1))})
    return cases


def gen_rtt(p, seed):
    cases = []
    for N in p["N"]:
        for L in p["L"]:
            for twisted in (False, True):
                for t in range(p["trials"]):
                    rng = _rng(seed, "rtt", 1000 * N + 100 * L + 10 * twisted + t)
                    tw = draw_rationals(rng, N, 1, avoid=[0]) if twisted else None
                    chain, xi = _random_chain(rng, N, L, tw)
                    u, v = draw_rationals(rng, 2, 1, avoid=xi)
                    cases.append({"check": "rtt", "chain": chain, "args": _enc([u, v]),
                                  "automorphism": bool(t % 2)})
    return cases


def gen_coloring(p, seed):
    cases = []
    L = p["L"]
    for k, (a, b) in enumerate((a, b) for a in range(L + 1) for b in range(a + 1) if a + b <= p["max_ab"]):
        rng = _rng(seed, "coloring", k)
        chain, xi = _random_chain(rng, 3, L)
        params = draw_rationals(rng, a + b, 1, avoid=xi)
        cases.append({"check": "sector", "chain": chain, "u": _enc(params[:a]), "v": _enc(params[a:])})
    for t in range(p["trials"]):
        rng = _rng(seed, "coloring", 1000 + t)
        chain, xi = _random_chain(rng, 3, L)
        z, w = draw_rationals(rng, 2, 1, avoid=xi)
        cases.append({"check": "negcal", "chain": chain, "args": _enc([z, w])})
        cases.append({"check": "no-color", "chain": chain, "args": _enc([z, w])})
        cases.append({"check": "sector-map", "chain": chain, "args": _enc([z])})
    return cases


def gen_dwpf(p, seed):
    cases = []
    for n in range(1, p["nmax"] + 1):
        for t in range(p["trials"]):
            rng = _rng(seed, "dwpf", 100 * n + t)
            x = draw_rationals(rng, 2 * n, 1)
            vbar, ubar = x[:n], x[n:]
            base = {"v": _enc(vbar), "u": _enc(ubar), "c": "1"}
            cases.append({"check": "det-rec", **base})
            cases.append({"check": "residue", **base})
            perm = [int(i) for i in rng.permutation(n)]
            cases.append({"check": "symmetry", "perm": perm, **base})
            cases.append({"check": "reflection", **base})
    return cases


def _bethe_cases(suite, p, seed, shapes, Ls, check, extra=0, twist=None):
    cases = []
    for L in Ls:
        for a, b in shapes:
            for t in range(p["trials"]):
                rng = _rng(seed, suite, 10_000 * L + 100 * (10 * a + b) + t)
                chain, xi = _random_chain(rng, 3, L, twist)
                x = draw_rationals(rng, a + b + extra, 1, avoid=xi)
                case = {"check": check, "chain": chain, "u": _enc(x[:a]), "v": _enc(x[a : a + b])}
                if extra:
                    case["z"] = encode_scalar(x[-1])
                cases.append(case)
    return cases


def gen_bv_equivalence(p, seed):
    shapes = [(a, b) for a in range(p["amax"] + 1) for b in range(p["bmax"] + 1)]
    cases = _bethe_cases("bv-equivalence", p, seed, shapes, range(2, p["lmax"] + 1), "bv-six")
    rng = _rng(seed, "bv-equivalence", 999_999)
    chain, xi = _random_chain(rng, 3, 2)
    u, v = draw_rationals(rng, 2, 1, avoid=xi)
    cases.append({"check": "psi11", "chain": chain, "u": _enc([u]), "v": _enc([v])})
    rng = _rng(seed, "bv-equivalence", 999_998)
    chain, xi = _random_chain(rng, 3, 3)
    x = draw_rationals(rng, 4, 1, avoid=xi)
    cases.append({"check": "bv-symmetry", "chain": chain, "u": _enc(x[:2]), "v": _enc(x[2:])})
    return cases


def gen_action(p, seed):
    shapes = [(a, b) for a in range(4) for b in range(4) if 0 < a + b <= p["max_ab"]]
    return _bethe_cases("action", p, seed, shapes, range(1, p["lmax"] + 1), "action", extra=1)


def gen_commutation(p, seed):
    return _bethe_cases("commutation-identity", p, seed, [tuple(s) for s in p["shapes"]], p["L"], "xy")


def gen_automorphism(p, seed):
    return _bethe_cases("automorphism", p, seed, [tuple(s) for s in p["shapes"]], p["L"], "automorphism")


def gen_composite(p, seed):
    cases = []
    L = p["L"]
    for n in range(p["nmax"] + 1):
        for cut in range(1, L):
            for t in range(p["trials"]):
                rng = _rng(seed, "composite", 100 * n + 10 * cut + t)
                tw = draw_rationals(rng, 2, 1, avoid=[0]) if t % 2 else None
                chain, xi = _random_chain(rng, 2, L, tw)
                cases.append({"check": "composite", "chain": chain, "cut": cut,
                              "v": _enc(draw_rationals(rng, n, 1, avoid=xi))})
    return cases


def gen_gl2_extras(p, seed):
    cases = []
    for n in range(1, p["nmax"] + 1):
        for t in range(p["trials"]):
            rng = _rng(seed, "gl2-extras", 100 * n + t)
            chain, xi = _random_chain(rng, 2, max(n, 2))
            x = draw_rationals(rng, n + 1, 1, avoid=xi)
            cases.append({"check": "gl2-action", "chain": chain, "u": _enc(x[:n]), "z": encode_scalar(x[n])})
            cases.append({"check": "gl2-action-at-xi", "chain": chain, "u": _enc(x[:n]),
                          "z": encode_scalar(xi[int(rng.integers(len(xi)))])})
    for N in p["isp_N"]:
        rng = _rng(seed, "gl2-extras", 10_000 + N)
        chain, _ = _random_chain(rng, N, 2)
        for k in range(1, 3):
            for i in range(1, N + 1):
                for j in range(1, N + 1):
                    cases.append({"check": "isp", "chain": chain, "k": k, "i": i, "j": j})
    rng = _rng(seed, "gl2-extras", 20_000)
    chain, _ = _random_chain(rng, 2, 2)
    for K in p["twists"]:
        cases.append({"check": "twisted-gl2", "chain": chain, "K": K})
    return cases


def gen_solve_verify(p, seed):
    cases = []
    for t in range(p["trials"]):
        rng = _rng(seed, "solve-verify", t)
        w = draw_rationals(rng, 1, 1, avoid=[0])[0]
        cases.append({"check": "quadratic", "chain": {"N": 3, "L": 2, "c": "1", "xi": ["0", encode_scalar(w)],
                                                      "twist": p["twist"]}, "seed": seed + t,
                      "starts": p["starts"]})
    for L in p["L"]:
        for t in range(p["trials"]):
            rng = _rng(seed, "solve-verify", 100 * L + t)
            chain, _ = _random_chain(rng, 3, L, [mpq(x) for x in p["twist"]])
            cases.append({"check": "onshell", "chain": chain, "a": 1, "b": 1, "seed": seed + t,
                          "starts": p["starts"], "probes": p["probes"]})
    return cases


GENERATORS = {
    "ybe": gen_ybe,
    "rtt": gen_rtt,
    "coloring": gen_coloring,
    "dwpf": gen_dwpf,
    "bv-equivalence": gen_bv_equivalence,
    "action": gen_action,
    "commutation-identity": gen_commutation,
    "composite": gen_composite,
    "automorphism": gen_automorphism,
    "gl2-extras": gen_gl2_extras,
    "solve-verify": gen_solve_verify,
}


# ------------------------------------------------------------------ checks


def _zero(res, mode, tol, scale=1.0):
    """(metric, pass) for a residual that must vanish."""
    metric = max_abs(res)
    if mode.exact:
        return metric, not np.any(np.asarray(res) != 0)
    return metric, metric <= tol * max(1.0, scale)


def _cfg(case, mode):
    return bethe.BetheConfig(_dec(case["u"], mode), _dec(case["v"], mode))


def chk_ybe(case, mode, tol):
    kind = rmatrix.RMatrixKind(case["kind"], case["N"], decode_scalar(case["c"]), decode_scalar(case["q"]))
    args = _dec(case["args"], mode)
    res = rmatrix.check_ybe(kind.builder(), *args)
    metric, zero = _zero(res, mode, tol)
    return metric, zero if case["expect_zero"] else not zero


def chk_gln(case, mode, tol):
    N = case["N"]
    G = np.array([[decode_scalar(x) for x in row] for row in case["G"]], dtype=object)
    if not mode.exact:
        G = G.astype(complex)
    u, v = _dec(case["args"], mode)
    R = rmatrix.rational_R(N, u, v, decode_scalar(case["c"]))
    m1, ok1 = _zero(rmatrix.check_gln_invariance(R, G), mode, tol)
    m2, ok2 = _zero(rmatrix.check_gln_invariance(R, G, linearized=True), mode, tol)
    return max(m1, m2), ok1 and ok2


def chk_mixed_rtt(case, mode, tol):
    return _zero(rmatrix.check_mixed_rtt(*_dec(case["args"], mode), decode_scalar(case["c"])), mode, tol)


def chk_rtt(case, mode, tol):
    spec = _spec(case["chain"], mode)
    u, v = _dec(case["args"], mode)
    model = monodromy.ChainModel(spec)
    if case.get("automorphism"):
        model = monodromy.AutomorphismModel(model)
    full, comp = monodromy.rtt_and_crcomp(model, u, v)
    m1, ok1 = _zero(full, mode, tol)
    m2 = max(max_abs(r) for r in comp.values())
    ok2 = all(_zero(r, mode, tol)[1] for r in comp.values())
    return max(m1, m2), ok1 and ok2


def chk_sector(case, mode, tol):
    spec = _spec(case["chain"], mode)
    cfg = _cfg(case, mode)
    psi = bethe.bv_partition(spec, cfg)
    P = monodromy.coloring_projector(spec, cfg.a, cfg.b)
    return _zero(apply(P, psi) - psi, mode, tol, max_abs(psi))


def chk_negcal(case, mode, tol):
    spec = _spec(case["chain"], mode)
    z, u = _dec(case["args"], mode)
    model = monodromy.ChainModel(spec)
    return _zero(bethe.apply_ops(model, [(3, 2, z), (1, 2, u)], model.vacuum()), mode, tol)


def chk_no_color(case, mode, tol):
    spec = _spec(case["chain"], mode)
    z, v = _dec(case["args"], mode)
    model = monodromy.ChainModel(spec)
    vec = bethe.apply_ops(model, [(2, 3, v)], model.vacuum())
    res = apply(model.T(z)[1, 1], vec) - model.lam(1, z) * vec
    return _zero(res, mode, tol, max_abs(vec))


def chk_sector_map(case, mode, tol):
    spec = _spec(case["chain"], mode)
    (z,) = _dec(case["args"], mode)
    T = monodromy.build_monodromy(spec, z)
    counts = monodromy.weight_counts(spec)
    bad = 0
    for i in range(1, 4):
        for j in range(1, 4):
            shift = np.zeros(3, dtype=int)
            shift[i - 1] -= 1
            shift[j - 1] += 1
            rows, cols = np.nonzero(np.asarray(T[i, j] != 0) if mode.exact else np.abs(T[i, j]) > tol)
            bad += int(np.sum(np.any(counts[rows] != counts[cols] + shift, axis=1)))
    return float(bad), bad == 0


def _dw(case, mode):
    return _dec(case["v"], mode), _dec(case["u"], mode), decode_scalar(case["c"]) if mode.exact else complex(
        decode_scalar(case["c"]))


def chk_det_rec(case, mode, tol):
    v, u, c = _dw(case, mode)
    inp = dwpf.DwpfInput(v, u, c)
    a, b = dwpf.dwpf_det(inp), dwpf.dwpf_recursive(inp)
    return _zero(np.array([a - b], dtype=object), mode, tol, abs(complex(a)))


def chk_residue(case, mode, tol):
    v, u, c = _dw(case, mode)
    inp = dwpf.DwpfInput(v, u, c)
    if mode.exact:
        return _zero(np.array([dwpf.dwpf_residue_check(inp)], dtype=object), mode, tol)
    val = dwpf.dwpf_residue_check(inp, numeric=True)
    ref = abs(complex(dwpf.residue_prediction(inp)))
    metric = abs(val)
    return metric, metric <= 1e-6 * max(1.0, ref)


def chk_symmetry(case, mode, tol):
    v, u, c = _dw(case, mode)
    perm = case["perm"]
    a = dwpf.dwpf(v, u, c)
    b = dwpf.dwpf([v[k] for k in perm], u, c)
    d = dwpf.dwpf(v, [u[k] for k in perm], c)
    return _zero(np.array([a - b, a - d], dtype=object), mode, tol, abs(complex(a)))


def chk_reflection(case, mode, tol):
    v, u, c = _dw(case, mode)
    a = dwpf.dwpf([-x for x in v], [-x for x in u], c)
    b = dwpf.dwpf(u, v, c)
    return _zero(np.array([a - b], dtype=object), mode, tol, abs(complex(a)))


def chk_bv_six(case, mode, tol):
    spec = _spec(case["chain"], mode)
    cfg = _cfg(case, mode)
    model = monodromy.ChainModel(spec)
    ref = bethe.bv_partition(model, cfg)
    vecs = [fn(model, cfg) for fn in bethe.METHODS.values()]
    vecs.append(bethe.bv_trace(model, cfg, index_set=(1, 2, 3)))
    diffs = np.concatenate([v - ref for v in vecs])
    return _zero(diffs, mode, tol, max_abs(ref))


def chk_psi11(case, mode, tol):
    spec = _spec(case["chain"], mode)
    (u,), (v,) = _dec(case["u"], mode), _dec(case["v"], mode)
    model = monodromy.ChainModel(spec)
    vac = model.vacuum()
    literal = (bethe.apply_ops(model, [(1, 2, u), (2, 3, v)], vac)
               + g_fn(v, u, spec.c) * model.lam(2, v) * bethe.apply_ops(model, [(1, 3, u)], vac))
    cfg = bethe.BetheConfig((u,), (v,))
    diffs = np.concatenate([fn(model, cfg) - literal for fn in bethe.METHODS.values()])
    return _zero(diffs, mode, tol, max_abs(literal))


def chk_bv_symmetry(case, mode, tol):
    spec = _spec(case["chain"], mode)
    cfg = _cfg(case, mode)
    model = monodromy.ChainModel(spec)
    ref = bethe.bv_nested(model, cfg)
    diffs = [bethe.bv_nested(model, bethe.BetheConfig(pu, pv)) - ref
             for pu in permutations(cfg.ubar) for pv in permutations(cfg.vbar)]
    return _zero(np.concatenate(diffs), mode, tol, max_abs(ref))


def chk_action(case, mode, tol):
    spec = _spec(case["chain"], mode)
    cfg = _cfg(case, mode)
    (z,) = _dec([case["z"]], mode)
    res = spectrum.action_residual(spec, cfg, z)
    return _zero(res, mode, tol, max_abs(bethe.bv_nested(spec, cfg)))


def chk_xy(case, mode, tol):
    spec = _spec(case["chain"], mode)
    cfg = _cfg(case, mode)
    return _zero(bethe.commutation_identity_check(spec, cfg.ubar, cfg.vbar), mode, tol)


def chk_automorphism(case, mode, tol):
    spec = _spec(case["chain"], mode)
    cfg = _cfg(case, mode)
    return _zero(bethe.automorphism_bv_check(spec, cfg), mode, tol)


def chk_composite(case, mode, tol):
    spec = _spec(case["chain"], mode)
    return _zero(bethe.composite_bv_check(spec, case["cut"], _dec(case["v"], mode)), mode, tol)


def chk_gl2_action(case, mode, tol):
    spec = _spec(case["chain"], mode)
    (z,) = _dec([case["z"]], mode)
    poly = case["check"] == "gl2-action-at-xi"
    return _zero(spectrum.gl2_action_check(spec, _dec(case["u"], mode), z, polynomial=poly), mode, tol)


def chk_isp(case, mode, tol):
    spec = _spec(case["chain"], mode)
    return _zero(spectrum.inverse_problem_check(spec, case["k"], case["i"], case["j"]), mode, tol)


def chk_twisted_gl2(case, mode, tol):
    spec = _spec(case["chain"], mode)
    root = spectrum.gl2_onshell_root(spec)
    rep = spectrum.twisted_gl2_onshell_check(spec, case["K"], [root])
    return rep.eig_error, rep.eig_error < 1e-10


def chk_quadratic(case, mode, tol):
    spec = monodromy.ChainSpec.from_json(case["chain"])
    roots = spectrum.solve_bethe(spec, 1, 0, spectrum.SolveOptions(starts=case["starts"], seed=case["seed"]))
    k1, k2 = complex(spec.kappa(1)), complex(spec.kappa(2))
    c, w = complex(spec.c), complex(spec.xi[1])
    # k1 (u + c)(u - w + c) = k2 u (u - w)
    A, B, C = k1 - k2, k1 * (2 * c - w) + k2 * w, k1 * c * (c - w)
    disc = cmath.sqrt(B * B - 4 * A * C)
    oracle = sorted([(-B + disc) / (2 * A), (-B - disc) / (2 * A)], key=lambda x: (x.real, x.imag))
    found = sorted([r.ubar[0] for r in roots], key=lambda x: (x.real, x.imag))
    if len(found) != 2:
        return float("inf"), False
    metric = max(abs(x - y) for x, y in zip(found, oracle))
    return metric, metric < 1e-10


def chk_onshell(case, mode, tol):
    spec = monodromy.ChainSpec.from_json(case["chain"])
    roots = spectrum.solve_bethe(spec, case["a"], case["b"],
                                 spectrum.SolveOptions(starts=case["starts"], seed=case["seed"]))
    if not roots:
        return float("inf"), False
    worst, ok = 0.0, True
    for r in roots:
        for rep in spectrum.verify_onshell(spec, r, [decode_scalar(z) for z in case["probes"]]):
            worst = max(worst, rep.eig_error)
            ok = ok and rep.eig_error < 1e-10 and rep.ed_match_index is not None
    return worst, ok


CHECKS = {
    "ybe": chk_ybe, "gln": chk_gln, "mixed-rtt": chk_mixed_rtt, "rtt": chk_rtt,
    "sector": chk_sector, "negcal": chk_negcal, "no-color": chk_no_color, "sector-map": chk_sector_map,
    "det-rec": chk_det_rec, "residue": chk_residue, "symmetry": chk_symmetry, "reflection": chk_reflection,
    "bv-six": chk_bv_six, "psi11": chk_psi11, "bv-symmetry": chk_bv_symmetry, "action": chk_action,
    "xy": chk_xy, "automorphism": chk_automorphism, "composite": chk_composite,
    "gl2-action": chk_gl2_action, "gl2-action-at-xi": chk_gl2_action, "isp": chk_isp,
    "twisted-gl2": chk_twisted_gl2, "quadratic": chk_quadratic, "onshell": chk_onshell,
}


def run_case(case: dict, mode: str = "exact", tol: float = DEFAULT_TOL) -> dict:
    fm = FieldMode(mode, tol)
    try:
        metric, ok = CHECKS[case["check"]](case, fm, tol)
        out = {"inputs": case, "metric": float(metric), "pass": bool(ok)}
    except Exception as exc:  # a failing case is reported, not raised
        out = {"inputs": case, "metric": None, "pass": False, "error": f"{type(exc).__name__}: {exc}"}
    return out


# ------------------------------------------------------------------ suites


def suite_params(suite: str, overrides: dict | None = None, pointer: str = "") -> dict:
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}", pointer or "/suite")
    params = dict(load_defaults()["suites"][suite])
    for key, val in (overrides or {}).items():
        if key not in params:
            raise ConfigError(f"unknown parameter {key!r} for suite {suite}", f"{pointer}/{key}")
        if type(val) is not type(params[key]) and not (isinstance(val, int) and isinstance(params[key], float)):
            raise ConfigError(f"expected {type(params[key]).__name__}", f"{pointer}/{key}")
        if isinstance(val, int) and not isinstance(val, bool) and val < 0:
            raise ConfigError("must be non-negative", f"{pointer}/{key}")
        params[key] = val
    return params


def build_cases(suite: str, params: dict, seed: int) -> list:
    return GENERATORS[suite](params, seed)


def run_suite(suite: str, params: dict | None = None, seed: int = 1, mode: str = "exact",
              tol: float = DEFAULT_TOL, executor=None) -> dict:
    """Report {suite, mode, seed, params, cases, summary}; cases keep generation order."""
    params = suite_params(suite, params)
    cases = build_cases(suite, params, seed)
    if executor is not None:
        results = list(executor.map(run_case, cases, [mode] * len(cases), [tol] * len(cases)))
    else:
        results = [run_case(c, mode, tol) for c in cases]
    passed = sum(r["pass"] for r in results)
    return {"suite": suite, "mode": mode, "seed": seed, "params": params, "cases": results,
            "summary": {"total": len(results), "passed": passed}}
