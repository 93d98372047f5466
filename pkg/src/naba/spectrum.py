"""Transfer matrix, action on Bethe vectors, Bethe equations and their solution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bethe import (
    BetheConfig,
    _model,
    bv_nested,
    bv_partition,
    gl2_bethe_vector,
    phi_vector,
    residue_vector,
)
from .errors import DegenerateRoot, NoConvergence, ShapeError, SingularTransfer, SingularTwist
from .monodromy import ChainModel, ChainSpec, build_monodromy, sector_indices
from .scalars import SOLVER_TOL, coerce, f_prod, field_of, g_fn
from .tensor import apply, basis_matrix, embed, matmul, to_complex

# ------------------------------------------------------------ transfer matrix


def transfer_matrix(spec: ChainSpec, z, polynomial: bool = False):
    """tr T(z) = sum_i T_ii(z)."""
    if not field_of(z).exact and spec.mode.exact:
        spec = spec.to_float()
    return build_monodromy(spec, coerce(z), polynomial).trace()


def tau_eval(z, cfg: BetheConfig, spec_or_model):
    """lambda_1(z) f(u,z) + lambda_2(z) f(z,u) f(v,z) + lambda_3(z) f(z,v)."""
    model = _model(spec_or_model, cfg.ubar, cfg.vbar, z)
    c, u, v = model.c, cfg.ubar, cfg.vbar
    return (model.lam(1, z) * f_prod(u, z, c)
            + model.lam(2, z) * f_prod(z, u, c) * f_prod(v, z, c)
            + model.lam(3, z) * f_prod(z, v, c))


def trace_action(model, z, vec):
    return sum(apply(model.T(z)[i, i], vec) for i in range(1, model.N + 1))


# ------------------------------------------------------------------ action


def m_hat(model, cfg: BetheConfig, z, k: int):
    """Coefficient of Phi(z, u_k) in the action of tr T(z)."""
    c, u, v = model.c, cfg.ubar, cfg.vbar
    uk, rest = u[k - 1], u[: k - 1] + u[k:]
    return (model.lam(1, uk) * g_fn(z, uk, c) * f_prod(rest, uk, c)
            + model.lam(2, uk) * g_fn(uk, z, c) * f_prod(uk, rest, c) * f_prod(v, uk, c))


def nested_defect(model, cfg: BetheConfig, w, j: int):
    """g(w, v_j) [lambda_2(v_j) f(v_j, u) f(v_j-bar, v_j) - lambda_3(v_j) f(v_j, v_j-bar)].

    Vanishes for every w when v_j satisfies its Bethe equation.
    """
    c, u, v = model.c, cfg.ubar, cfg.vbar
    vj, rest = v[j - 1], v[: j - 1] + v[j:]
    bracket = (model.lam(2, vj) * f_prod(vj, u, c) * f_prod(rest, vj, c)
               - model.lam(3, vj) * f_prod(vj, rest, c))
    return g_fn(w, vj, c) * bracket


def action_residual(spec_or_model, cfg: BetheConfig, z, complete: bool = True, keep_F: bool = False):
    """tr T(z) Psi - tau(z) Psi - sum_k M_k Phi_k, minus the nested unwanted terms.

    The first three terms alone close only when v satisfies its Bethe
    equations.  With ``complete=True`` (default) the terms proportional to
    the nested defects are subtracted as well,

        sum_j N_j(z) Psi(u; v with v_j -> z)
        + sum_{k,j} g(u_k, z) N_j(u_k) X_{kj},

    where X_{kj} is ``residue_vector``; the residual is then zero for
    arbitrary parameters.  ``keep_F`` selects the Phi variant with F(u; v)
    left untouched.
    """
    model = _model(spec_or_model, cfg.ubar, cfg.vbar, z)
    z = coerce(z)
    psi = bv_nested(model, cfg)
    res = trace_action(model, z, psi) - tau_eval(z, cfg, model) * psi
    for k in range(1, cfg.a + 1):
        res = res - m_hat(model, cfg, z, k) * phi_vector(model, cfg, z, k, keep_F=keep_F)
    if not complete:
        return res
    for j in range(1, cfg.b + 1):
        vz = cfg.vbar[: j - 1] + (z,) + cfg.vbar[j:]
        res = res - nested_defect(model, cfg, z, j) * bv_nested(model, BetheConfig(cfg.ubar, vz))
        for k in range(1, cfg.a + 1):
            uk = cfg.ubar[k - 1]
            w = g_fn(uk, z, model.c) * nested_defect(model, cfg, uk, j)
            res = res - w * residue_vector(model, cfg, z, k, j)
    return res


# ---------------------------------------------------------- Bethe equations


def _affine_terms(spec: ChainSpec, a: int, b: int):
    """Each residual as (coef_1, factors_1, coef_2, factors_2) with factors (index->coef, const).

    Unknowns are x = (u_1..u_a, v_1..v_b).  lambda_1 = k_1 prod f(w, xi) and
    lambda_{2,3} = k_{2,3}; denominators are cleared, so each side is a
    constant times a product of affine forms in x.
    """
    c = spec.c
    out = []
    for k in range(a):
        lhs = [({k: 1}, -x + c) for x in spec.xi]
        lhs += [({l: 1, k: -1}, c) for l in range(a) if l != k]
        lhs += [({a + j: 1, k: -1}, 0) for j in range(b)]
        rhs = [({k: 1}, -x) for x in spec.xi]
        rhs += [({k: 1, l: -1}, c) for l in range(a) if l != k]
        rhs += [({a + j: 1, k: -1}, c) for j in range(b)]
        out.append((spec.kappa(1), lhs, spec.kappa(2) * (-1) ** (a - 1), rhs))
    for j in range(b):
        lhs = [({a + l: 1, a + j: -1}, c) for l in range(b) if l != j]
        lhs += [({a + j: 1, k: -1}, c) for k in range(a)]
        rhs = [({a + j: 1, a + l: -1}, c) for l in range(b) if l != j]
        rhs += [({a + j: 1, k: -1}, 0) for k in range(a)]
        out.append((spec.kappa(2), lhs, spec.kappa(3) * (-1) ** (b - 1), rhs))
    return out


def _eval_side(coef, factors, x):
    val = coef
    for lin, const in factors:
        val = val * (sum(cf * x[i] for i, cf in lin.items()) + const)
    return val


def bethe_residuals(spec: ChainSpec, cfg: BetheConfig):
    """Pole-cleared Bethe-equation residuals, one per u_k then one per v_j.

    u_k: lambda_1(u_k) f(u_k-bar, u_k) = lambda_2(u_k) f(u_k, u_k-bar) f(v, u_k)
    v_j: lambda_2(v_j) f(v_j-bar, v_j) f(v_j, u) = lambda_3(v_j) f(v_j, v_j-bar)
    """
    if cfg.b and spec.N < 3:
        raise ShapeError("v equations need N = 3")
    x = cfg.ubar + cfg.vbar
    return [_eval_side(c1, f1, x) - _eval_side(c2, f2, x) for c1, f1, c2, f2 in _affine_terms(spec, cfg.a, cfg.b)]


def _relative_norm(terms, x):
    worst = 0.0
    for c1, f1, c2, f2 in terms:
        p1, p2 = complex(_eval_side(c1, f1, x)), complex(_eval_side(c2, f2, x))
        worst = max(worst, abs(p1 - p2) / max(1.0, abs(p1) + abs(p2)))
    return worst


def _side_gradient(coef, factors, x, n):
    vals = [sum(cf * x[i] for i, cf in lin.items()) + const for lin, const in factors]
    grad = np.zeros(n, dtype=complex)
    for p, (lin, _) in enumerate(factors):
        others = coef * np.prod([vals[q] for q in range(len(vals)) if q != p])
        for i, cf in lin.items():
            grad[i] += cf * others
    return grad


@dataclass(frozen=True)
class BetheRoots:
    ubar: tuple
    vbar: tuple
    residual_norm: float

    @property
    def config(self) -> BetheConfig:
        return BetheConfig(self.ubar, self.vbar)

    def to_json(self) -> dict:
        return {"u": [[z.real, z.imag] for z in self.ubar], "v": [[z.real, z.imag] for z in self.vbar],
                "residual": self.residual_norm}

    @classmethod
    def from_json(cls, obj) -> "BetheRoots":
        return cls(tuple(complex(*p) for p in obj["u"]), tuple(complex(*p) for p in obj["v"]),
                   float(obj.get("residual", 0.0)))


@dataclass
class SolveOptions:
    starts: int = 64
    seed: int = 0
    tol: float = SOLVER_TOL
    max_iter: int = 100
    max_halvings: int = 30
    far: float = 1e6
    collide: float = 1e-8
    polish: int = 3


def newton(terms, x0, opts: SolveOptions):
    """Damped Newton on the pole-cleared system; raises NoConvergence."""
    x = np.array(x0, dtype=complex)
    n = len(x)

    def F(y):
        return np.array([complex(_eval_side(c1, f1, y) - _eval_side(c2, f2, y)) for c1, f1, c2, f2 in terms])

    def scaled(y):
        return np.linalg.norm(F(y))

    def step_at(y):
        J = np.array([_side_gradient(c1, f1, y, n) - _side_gradient(c2, f2, y, n) for c1, f1, c2, f2 in terms])
        try:
            return np.linalg.solve(J, -F(y))
        except np.linalg.LinAlgError:
            return np.linalg.lstsq(J, -F(y), rcond=None)[0]

    def polish(y):
        # a few undamped steps past the tolerance, kept while they help
        best = _relative_norm(terms, y)
        for _ in range(opts.polish):
            trial = y + step_at(y)
            r = _relative_norm(terms, trial)
            if not r < best:
                break
            y, best = trial, r
        return y

    fx = scaled(x)
    for _ in range(opts.max_iter):
        if _relative_norm(terms, x) < opts.tol:
            return polish(x)
        step = step_at(x)
        t = 1.0
        for _ in range(opts.max_halvings):
            trial = x + t * step
            ft = scaled(trial)
            if np.isfinite(ft) and ft <= fx:
                break
            t /= 2
        x, fx = trial, ft
        if np.max(np.abs(x)) > opts.far:
            raise NoConvergence("iterate escaped to infinity")
    if _relative_norm(terms, x) < opts.tol:
        return polish(x)
    raise NoConvergence(f"no convergence in {opts.max_iter} iterations")


def _check_root(x, a, xi, opts):
    """Raise DegenerateRoot for collisions that make the cleared system spurious."""
    u, v = x[:a], x[a:]
    for group in (u, v):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if abs(group[i] - group[j]) < opts.collide:
                    raise DegenerateRoot("coinciding Bethe parameters")
    for p in u:
        if any(abs(p - q) < opts.collide for q in v) or any(abs(p - s) < opts.collide for s in xi):
            raise DegenerateRoot("Bethe parameter at a pole")


def _canonical(x, a):
    key = lambda z: (round(z.real, 12), round(z.imag, 12))
    x = [complex(z) for z in x]
    return tuple(sorted(x[:a], key=key)), tuple(sorted(x[a:], key=key))


def solve_bethe(spec: ChainSpec, a: int, b: int, opts: SolveOptions | None = None, diagnostics: dict | None = None):
    """All distinct finite roots found by multi-start damped Newton.

    Starts are uniform in the disk of radius max(2|c|, 2 max|xi|) about the
    centroid of xi; start i draws from its own stream spawned from the seed.
    """
    opts = opts or SolveOptions()
    if b and spec.N < 3:
        raise ShapeError("v equations need N = 3")
    fspec = spec.to_float()
    terms = _affine_terms(fspec, a, b)
    xi = [complex(x) for x in fspec.xi]
    centre = np.mean(xi)
    radius = max(2 * abs(complex(fspec.c)), 2 * max(abs(x) for x in xi))
    n = a + b
    found: list[BetheRoots] = []
    stats = {"starts": opts.starts, "converged": 0, "no_convergence": 0, "degenerate": 0, "duplicates": 0}
    if n == 0:
        found.append(BetheRoots((), (), 0.0))
    for stream in (np.random.SeedSequence(opts.seed).spawn(opts.starts) if n else []):
        rng = np.random.default_rng(stream)
        r = radius * np.sqrt(rng.random(n))
        x0 = centre + r * np.exp(2j * np.pi * rng.random(n))
        try:
            x = newton(terms, x0, opts)
            _check_root(x, a, xi, opts)
        except NoConvergence:
            stats["no_convergence"] += 1
            continue
        except DegenerateRoot:
            stats["degenerate"] += 1
            continue
        stats["converged"] += 1
        u, v = _canonical(x, a)
        if any(max([abs(p - q) for p, q in zip(u + v, r_.ubar + r_.vbar)], default=0) < opts.collide for r_ in found):
            stats["duplicates"] += 1
            continue
        found.append(BetheRoots(u, v, _relative_norm(terms, u + v)))
    found.sort(key=lambda r_: [(z.real, z.imag) for z in r_.ubar + r_.vbar])
    if diagnostics is not None:
        diagnostics.update(stats)
    return found


# ------------------------------------------------------------ verification


@dataclass
class EigenReport:
    z: complex
    tau: complex
    eig_error: float
    ed_match_index: int | None = None
    ed_distance: float | None = None

    def to_json(self) -> dict:
        return {"z": [self.z.real, self.z.imag], "tau": [self.tau.real, self.tau.imag],
                "eig_error": self.eig_error, "ed_match_index": self.ed_match_index}


def exact_diag(spec: ChainSpec, z, sector: tuple | None = None):
    """Eigenvalues of tr T(z) (float), optionally restricted to the (a, b) weight sector."""
    op = to_complex(transfer_matrix(spec.to_float(), complex(z)))
    if sector is not None:
        idx = sector_indices(spec, *sector)
        op = op[np.ix_(idx, idx)]
    vals = np.linalg.eigvals(op)
    return sorted(vals, key=lambda w: (round(w.real, 10), round(w.imag, 10)))


def eigen_report(op, psi, tau, z, ed=None, ed_tol=1e-8):
    norm = np.linalg.norm(psi)
    err = float(np.linalg.norm(op @ psi - tau * psi) / norm) if norm > 0 else float("inf")
    rep = EigenReport(complex(z), complex(tau), err)
    if ed is not None and len(ed):
        dist = np.abs(np.asarray(ed) - tau)
        i = int(np.argmin(dist))
        rep.ed_distance = float(dist[i])
        rep.ed_match_index = i if dist[i] < ed_tol else None
    return rep


def verify_onshell(spec: ChainSpec, roots: BetheRoots, zs, compare_ed: bool = True, method=bv_partition):
    """Eigen-relation tr T(z) Psi = tau(z) Psi at each probe, plus the ED match."""
    fspec = spec.to_float()
    model = ChainModel(fspec)
    cfg = BetheConfig(tuple(complex(x) for x in roots.ubar), tuple(complex(x) for x in roots.vbar))
    psi = to_complex(method(model, cfg))
    reports = []
    for z in zs:
        z = complex(z)
        op = to_complex(transfer_matrix(fspec, z))
        ed = exact_diag(fspec, z, (cfg.a, cfg.b)) if compare_ed else None
        reports.append(eigen_report(op, psi, tau_eval(z, cfg, model), z, ed))
    return reports


# ------------------------------------------------------------ gl(2) extras


def gl2_action_check(spec: ChainSpec, ubar, z, literal_sign: bool = False, polynomial: bool = False):
    """T11(z) B(u)|0> - a(z) f(u,z) B(u)|0> - sum_j a(u_j) g(z,u_j) f(u_j-bar,u_j) B(u with u_j->z)|0>.

    ``literal_sign=True`` uses g(u_j, z) in the last sum instead.
    ``polynomial=True`` uses the pole-free normalization, so z may equal xi_k.
    """
    if spec.N != 2:
        raise ShapeError("gl2_action_check needs N = 2")
    ubar = tuple(coerce(u) for u in ubar)
    z = coerce(z)
    model = _model(spec, ubar, z)
    if polynomial:
        model = ChainModel(model.spec, polynomial=True)
    c = model.c
    psi = gl2_bethe_vector(model, ubar)
    res = apply(model.T(z)[1, 1], psi) - model.lam(1, z) * f_prod(ubar, z, c) * psi
    for j, uj in enumerate(ubar):
        rest = ubar[:j] + ubar[j + 1 :]
        g = g_fn(uj, z, c) if literal_sign else g_fn(z, uj, c)
        phi = gl2_bethe_vector(model, (z,) + rest)
        res = res - model.lam(1, uj) * g * f_prod(rest, uj, c) * phi
    return res


def _check_invertible(op):
    vals = np.abs(np.linalg.eigvals(to_complex(op)))
    if vals.min() <= 1e-12 * max(1.0, vals.max()):
        raise SingularTransfer("transfer matrix at an inhomogeneity is singular")


def inverse_problem_check(spec: ChainSpec, k: int, i: int, j: int):
    """E^{ij}_k prod_{l<=k} tr T(xi_l) - prod_{l<k} tr T(xi_l) T_ji(xi_k), polynomial normalization."""
    if not 1 <= k <= spec.L:
        raise IndexError(f"site {k} outside 1..{spec.L}")
    mode = spec.mode
    transfers = [transfer_matrix(spec, spec.xi[l], polynomial=True) for l in range(k)]
    for t in transfers:
        _check_invertible(t)
    left = embed(basis_matrix(spec.N, i, j, mode), spec.shape.dims, k - 1)
    for t in transfers:
        left = matmul(left, t)
    right = mode.eye(spec.dim)
    for t in transfers[:-1]:
        right = matmul(right, t)
    right = matmul(right, build_monodromy(spec, spec.xi[k - 1], polynomial=True)[j, i])
    return left - right


def twisted_B(model, K, u):
    """(K T(u) K^{-1})_{12} for an N = 2 model."""
    K = np.asarray(K)
    Kinv = np.linalg.inv(K.astype(complex)) if K.dtype != object else _inv2(K)
    T = model.T(u)
    return sum(K[0, p] * T[p + 1, q + 1] * Kinv[q, 1] for p in range(2) for q in range(2))


def _inv2(K):
    det = K[0, 0] * K[1, 1] - K[0, 1] * K[1, 0]
    return np.array([[K[1, 1] / det, -K[0, 1] / det], [-K[1, 0] / det, K[0, 0] / det]], dtype=object)


def gl2_tau(model, ubar, z):
    c = model.c
    return model.lam(1, z) * f_prod(ubar, z, c) + model.lam(2, z) * f_prod(z, ubar, c)


def twisted_gl2_onshell_check(spec: ChainSpec, K, roots, zs=(0.3, 0.7 + 0.2j, 1.9)):
    """Eigen-relation for B~(u_1)...B~(u_n)|0> with B~ = (K T K^{-1})_{12}; worst report."""
    if spec.N != 2:
        raise ShapeError("twisted gl(2) check needs N = 2")
    K = np.asarray(K, dtype=complex)
    if K.shape != (2, 2) or abs(np.linalg.det(K)) < 1e-14:
        raise SingularTwist("K is not invertible")
    if abs(K[0, 0]) < 1e-14:
        raise SingularTwist("K_11 must be nonzero")
    fspec = spec.to_float()
    model = ChainModel(fspec)
    ubar = tuple(complex(u) for u in roots)
    psi = to_complex(model.vacuum())
    for u in reversed(ubar):
        psi = to_complex(twisted_B(model, K, u)) @ psi
    worst = None
    for z in zs:
        op = to_complex(model.T(complex(z)).trace())
        rep = eigen_report(op, psi, gl2_tau(model, ubar, complex(z)), z)
        if worst is None or rep.eig_error > worst.eig_error:
            worst = rep
    return worst


def gl2_onshell_root(spec: ChainSpec):
    """The n = 1 gl(2) root a(u) = d(u) of an untwisted L = 2 chain: u = (xi_1 + xi_2 - c)/2."""
    if spec.N != 2 or spec.L != 2:
        raise ShapeError("closed form needs N = 2, L = 2")
    return (spec.xi[0] + spec.xi[1] - spec.c) / 2
