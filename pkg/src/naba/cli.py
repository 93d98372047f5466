"""Command-line interface: ``naba <subcommand>``.

Exit codes: 0 when every check passes, 1 on any verification failure,
2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bethe, dwpf, spectrum, suites
from .errors import ConfigError, NabaError
from .monodromy import ChainSpec, build_monodromy
from .scalars import SOLVER_TOL, encode_scalar, parse_rational
from .tensor import op_to_json, vec_to_json


def _scalars(text: str, pointer: str):
    if text is None or text.strip() == "":
        return ()
    out = []
    for k, item in enumerate(text.split(",")):
        try:
            out.append(parse_rational(item))
        except NabaError:
            try:
                out.append(complex(item.replace(" ", "")))
            except ValueError:
                raise ConfigError(f"cannot parse scalar {item!r}", f"{pointer}/{k}") from None
    return tuple(out)


def _read_json(path: str, pointer: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}", pointer) from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc.msg}", pointer) from None


def _chain(args, mode="exact") -> ChainSpec:
    if not args.config:
        raise ConfigError("a chain configuration is required (--config)", "/config")
    obj = _read_json(args.config, "/config")
    if not isinstance(obj, dict):
        raise ConfigError("chain configuration must be a JSON object", "")
    spec = ChainSpec.from_json(obj)
    return spec.to_float() if mode == "float" else spec


def _emit(obj, args):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    target = args.json or args.out
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def _summarize(report) -> str:
    s = report["summary"]
    return f"{report['suite']}: {s['passed']}/{s['total']} passed"


def _executor(args):
    return ProcessPoolExecutor() if getattr(args, "parallel", False) else None


def _verify_params(args):
    params = {}
    if args.config:
        obj = _read_json(args.config, "/config")
        if not isinstance(obj, dict):
            raise ConfigError("suite parameters must be a JSON object", "")
        params.update(obj)
    for key in ("amax", "bmax", "lmax", "trials"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    return params


def _run(suite_names, args):
    reports = []
    ex = _executor(args)
    try:
        for name in suite_names:
            start = time.perf_counter()
            params = _verify_params(args) if args.command == "verify" else None
            report = suites.run_suite(name, params, args.seed, args.mode, args.tol, ex)
            if args.timing:
                report["summary"]["wall_ms"] = round(1000 * (time.perf_counter() - start), 1)
            reports.append(report)
            print(_summarize(report), file=sys.stderr)
    finally:
        if ex is not None:
            ex.shutdown()
    return reports


def cmd_verify(args):
    if args.suite not in suites.SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}", "/suite")
    (report,) = _run([args.suite], args)
    _emit(report, args)
    return 0 if report["summary"]["passed"] == report["summary"]["total"] else 1


def cmd_run_all(args):
    reports = _run(suites.SUITES, args)
    total = sum(r["summary"]["total"] for r in reports)
    passed = sum(r["summary"]["passed"] for r in reports)
    _emit({"seed": args.seed, "mode": args.mode, "suites": reports,
           "summary": {"total": total, "passed": passed}}, args)
    return 0 if passed == total else 1


def cmd_dwpf(args):
    c = _scalars(args.c, "/c")
    if len(c) != 1:
        raise ConfigError("expected a single scalar", "/c")
    v, u = _scalars(args.v, "/v"), _scalars(args.u, "/u")
    if args.mode == "float":
        v, u, c = tuple(map(complex, v)), tuple(map(complex, u)), (complex(c[0]),)
    try:
        inp = dwpf.DwpfInput(v, u, c[0])
    except NabaError as exc:
        raise ConfigError(str(exc), "/v") from None
    a, b = dwpf.dwpf_det(inp), dwpf.dwpf_recursive(inp)
    agree = a == b if args.mode == "exact" else abs(a - b) <= args.tol * max(1.0, abs(a))
    _emit({"value": encode_scalar(a), "method_agreement": bool(agree)}, args)
    return 0 if agree else 1


def cmd_monodromy(args):
    spec = _chain(args, args.mode)
    (u,) = _scalars(args.u, "/u") or (None,)
    if u is None:
        raise ConfigError("spectral parameter required", "/u")
    if args.mode == "float":
        u = complex(u)
    T = build_monodromy(spec, u)
    dims = list(spec.shape.dims)
    blocks = [[op_to_json(T[i, j], dims) for j in range(1, spec.N + 1)] for i in range(1, spec.N + 1)]
    _emit({"spec": spec.to_json(), "u": encode_scalar(u), "blocks": blocks}, args)
    return 0


def cmd_bethe_vector(args):
    spec = _chain(args, args.mode)
    u, v = _scalars(args.u, "/u"), _scalars(args.v, "/v")
    if args.mode == "float":
        u, v = tuple(map(complex, u)), tuple(map(complex, v))
    if args.method not in bethe.METHODS:
        raise ConfigError(f"unknown method {args.method!r}", "/method")
    try:
        cfg = bethe.BetheConfig(u, v)
    except NabaError as exc:
        raise ConfigError(str(exc), "/u") from None
    psi = bethe.bethe_vector(spec, cfg, args.method)
    _emit({"spec": spec.to_json(), "u": [encode_scalar(x) for x in u], "v": [encode_scalar(x) for x in v],
           "method": args.method, "vector": vec_to_json(psi, list(spec.shape.dims))}, args)
    return 0


def cmd_solve(args):
    spec = _chain(args)
    opts = spectrum.SolveOptions(starts=args.starts, seed=args.seed, tol=args.tol)
    diag = {}
    roots = spectrum.solve_bethe(spec, args.a, args.b, opts, diag)
    _emit({"spec": spec.to_json(), "a": args.a, "b": args.b, "roots": [r.to_json() for r in roots],
           "diagnostics": diag}, args)
    return 0


def cmd_spectrum(args):
    spec = _chain(args)
    if not args.roots:
        raise ConfigError("a roots file is required (--roots)", "/roots")
    obj = _read_json(args.roots, "/roots")
    try:
        roots = [spectrum.BetheRoots.from_json(r) for r in obj["roots"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed roots file: {exc}", "/roots") from None
    probes = [complex(z) for z in _scalars(args.probes, "/probes")]
    out_roots, reports, ok = [], [], True
    for r in roots:
        out_roots.append(r.to_json())
        for rep in spectrum.verify_onshell(spec, r, probes, compare_ed=args.compare_ed):
            reports.append(rep.to_json())
            ok = ok and rep.eig_error < 1e-10 and (not args.compare_ed or rep.ed_match_index is not None)
    _emit({"roots": out_roots, "reports": reports}, args)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    defaults = suites.load_defaults()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file: chain spec, or suite parameters for verify")
    common.add_argument("--seed", type=int, default=defaults["seed"])
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, help=f"float-mode tolerance (default {defaults['tol']}; "
                        f"solve: {SOLVER_TOL})")
    common.add_argument("--out", help="write the JSON result to this file")
    common.add_argument("--json", help="write the JSON result to this file ('-' for stdout)")
    common.add_argument("--parallel", action="store_true", help="evaluate independent cases in worker processes")
    common.add_argument("--timing", action="store_true", help="include wall-clock times in reports")

    p = argparse.ArgumentParser(prog="naba", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run one verification suite")
    v.add_argument("--suite", required=True, help=", ".join(suites.SUITES))
    for key in ("amax", "bmax", "lmax", "trials"):
        v.add_argument(f"--{key}", type=int)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("run-all", parents=[common], help="run every suite at its default grid")
    r.set_defaults(func=cmd_run_all)

    d = sub.add_parser("dwpf", parents=[common], help="domain-wall partition function")
    d.add_argument("--c", required=True)
    d.add_argument("--v", required=True)
    d.add_argument("--u", required=True)
    d.set_defaults(func=cmd_dwpf)

    m = sub.add_parser("monodromy", parents=[common], help="monodromy blocks at one point")
    m.add_argument("--u", required=True)
    m.set_defaults(func=cmd_monodromy)

    b = sub.add_parser("bethe-vector", parents=[common], help="off-shell Bethe vector")
    b.add_argument("--u", default="")
    b.add_argument("--v", default="")
    b.add_argument("--method", default="partition", help=", ".join(bethe.METHODS))
    b.set_defaults(func=cmd_bethe_vector)

    s = sub.add_parser("solve", parents=[common], help="solve the Bethe equations")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, default=0)
    s.add_argument("--starts", type=int, default=64)
    s.set_defaults(func=cmd_solve)

    sp = sub.add_parser("spectrum", parents=[common], help="check roots against the transfer matrix")
    sp.add_argument("--roots")
    sp.add_argument("--probes", default="1/5,2/5,3")
    sp.add_argument("--compare-ed", action="store_true")
    sp.set_defaults(func=cmd_spectrum)
    return p


def parse_args(argv=None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if args.tol is None:
        # resolved here: set_defaults on one subparser would leak through the shared parent action
        args.tol = SOLVER_TOL if args.command == "solve" else suites.load_defaults()["tol"]
    return args


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NabaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
