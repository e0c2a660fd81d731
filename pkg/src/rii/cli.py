"""Command-line front end.

Exit codes: 0 on success, 1 when a verification suite finds a failure,
2 for an invalid configuration, 3 when the method does not fit the family
mode (for example a path sum over an infinite class with numeric weights).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import constmoments as cm
from .algebra import Poly, TruncatedSeries
from .errors import (
    ConvergenceError,
    InadmissibleFamily,
    ModeMismatch,
    OutOfDomain,
    UnsupportedNumericClass,
    UnsupportedPattern,
)
from .families import (
    PATTERNS,
    GOOD_BASES,
    FamilySpec,
    compute_d,
    compute_P,
    full_box,
    good_basis_closure,
    leading_coeff,
)
from .functional import (
    check_duality_identity,
    duality_sides,
    has_nonnegative_integer_coeffs,
    mu_nrs,
    tau_by_paths,
    tau_by_solve,
)
from .involution import verify_involution

EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_MODE = 3


class ConfigError(Exception):
    pass


class ModeError(Exception):
    pass


def workers() -> int:
    try:
        n = int(os.environ.get("RII_THREADS", "1"))
    except ValueError:
        raise ConfigError("RII_THREADS must be an integer")
    return max(1, n)


def run_all(fn, jobs):
    """Apply fn to every job, possibly in parallel; results keep job order."""
    jobs = list(jobs)
    w = min(workers(), max(1, len(jobs)))
    if w == 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, jobs))


# -- family loading ------------------------------------------------------------

def load_family(args) -> FamilySpec:
    if getattr(args, "const", False):
        if args.family:
            raise ConfigError("--const and --family are exclusive")
        try:
            return FamilySpec.constant(args.a, args.b, args.c, args.lam)
        except InadmissibleFamily as e:
            raise ConfigError(str(e))
    if args.family:
        try:
            return FamilySpec.load(args.family)
        except OSError as e:
            raise ConfigError(f"cannot read family file: {e}")
        except InadmissibleFamily as e:
            raise ConfigError(str(e))
    return FamilySpec.symbolic()


def const_params(fam: FamilySpec, tol: float = 1e-15) -> cm.ConstParams:
    try:
        return cm.ConstParams.from_family(fam, tol)
    except ModeMismatch as e:
        raise ModeError(str(e))


def _nonneg(name, v):
    if v is None:
        return
    if v < 0:
        raise ConfigError(f"--{name} must be nonnegative")


# -- output ----------------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def series_csv(p: Poly) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["coeff", "monomial"])
    for entry, (key, _) in zip(p.to_json(), p.sorted_terms()):
        w.writerow([entry["coeff"], Poly({key: 1}, _trusted=True).__str__()])
    return buf.getvalue()


def rows_csv(rows: list) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def _fmt(v):
    return repr(v) if isinstance(v, float) else v


def emit_series(args, kind, n, r, s, cap, method, series: TruncatedSeries) -> str:
    if args.format == "json":
        return dump_json({"n": n, "r": r, "s": s, "cap": cap, "method": method,
                          "series": series.body.to_json()})
    if args.format == "csv":
        return series_csv(series.body)
    return f"{series.body}\n"


def emit_value(args, kind, n, method, value: float) -> str:
    if args.format == "json":
        return dump_json({"n": n, "r": 0, "s": 0, "cap": None, "method": method,
                          "value": value})
    if args.format == "csv":
        return rows_csv([{"n": n, "method": method, "value": value}])
    return f"{value!r}\n"


# -- commands ----------------------------------------------------------------------

SYMBOLIC_MOMENT = ("paths", "dp", "recurrence")
NUMERIC_MOMENT = ("closed", "gf", "transform", "transform-r1")


def cmd_moment(args) -> tuple[str, int]:
    fam = load_family(args)
    for name in ("n", "r", "s", "cap"):
        _nonneg(name, getattr(args, name))
    method = args.method or ("dp" if fam.is_symbolic else "closed")
    if method in NUMERIC_MOMENT:
        if fam.is_symbolic:
            raise ModeError(f"method {method} needs a numeric constant family")
        if args.r or args.s:
            raise ConfigError("numeric constant moments are available for r = s = 0 only")
        p = const_params(fam, args.tol)
        if method == "closed":
            v = cm.mu_const_closed(args.n, p)
        elif method == "gf":
            v = cm.mu_gf_coeffs(args.n, p)[args.n]
        elif method == "transform":
            v = cm.catalan_gf(p.c) * cm.weighted_path_moments(
                "Motzkin", cm.classical_transform(p), args.n)
        else:
            v = cm.catalan_gf(p.c) * cm.weighted_path_moments(
                "MotzkinSchroeder", cm.r1_transform(p), args.n)
        return emit_value(args, "mu", args.n, method, v), 0
    if method not in SYMBOLIC_MOMENT:
        raise ConfigError(f"unknown method {method!r}")
    if not fam.is_symbolic:
        raise ModeError(f"method {method} sums infinitely many paths; use closed, gf or transform")
    if args.cap is None:
        raise ConfigError("--cap is required for symbolic moments")
    series = mu_nrs(args.n, args.r, args.s, args.cap, fam, method)
    return emit_series(args, "mu", args.n, args.r, args.s, args.cap, method, series), 0


def cmd_dual(args) -> tuple[str, int]:
    fam = load_family(args)
    for name in ("n", "r", "s", "cap"):
        _nonneg(name, getattr(args, name))
    method = args.method or "paths"
    if not fam.is_symbolic and method == "paths":
        raise ModeError("restricted path sums are infinite for numeric families; use solve")
    if args.cap is None and not fam.is_zero("c"):
        raise ConfigError("--cap is required when c is not identically zero")
    if method == "paths":
        series = tau_by_paths(args.n, args.r, args.s, args.cap, fam)
    elif method == "solve":
        row = tau_by_solve(args.n, args.r, max(args.s, args.n + args.r), args.cap, fam)
        series = row[args.s]
    else:
        raise ConfigError(f"unknown method {method!r}")
    return emit_series(args, "tau", args.n, args.r, args.s, args.cap, method, series), 0


def cmd_polys(args) -> tuple[str, int]:
    fam = load_family(args)
    _nonneg("n", args.n)
    ks = range(args.n + 1) if args.all else [args.n]
    items = [(k, compute_P(k, fam), compute_d(k, fam), leading_coeff(k, fam)) for k in ks]
    if args.format == "json":
        return dump_json([
            {"n": k, "P": P.to_json(), "d": d.to_json(), "lead": l.to_json()}
            for k, P, d, l in items
        ]), 0
    if args.format == "csv":
        rows = [{"n": k, "P": str(P), "d": str(d), "lead": str(l)} for k, P, d, l in items]
        return rows_csv(rows), 0
    lines = []
    for k, P, d, l in items:
        lines += [f"P_{k} = {P}", f"d_{k} = {d}", f"l_{k} = {l}"]
    return "\n".join(lines) + "\n", 0


# -- verification suites -----------------------------------------------------------

def suite_involution(args, fam):
    if not fam.is_symbolic:
        raise ModeError("the involution suite is symbolic")
    if args.max is not None:
        jobs = [(n, r) for n in range(args.max + 1) for r in range(args.max + 1 - n)]
    else:
        jobs = [(args.n, args.r)]
    reports = run_all(lambda j: verify_involution(j[0], j[1], args.cap, fam), jobs)
    return reports, all(r["passed"] for r in reports)


def suite_eq2(args, fam):
    if not fam.is_symbolic:
        raise ModeError("the duality suite is symbolic")
    M = args.max if args.max is not None else 3
    jobs = [(n, r, l) for n in range(M + 1) for r in range(M + 1) for l in range(M + 1)]

    def one(j):
        n, r, l = j
        ok = check_duality_identity(n, r, l, args.cap, fam)
        item = {"n": n, "r": r, "l": l, "cap": args.cap, "passed": ok}
        if not ok:
            lhs, rhs = duality_sides(n, r, l, args.cap, fam)
            item.update({"lhs": str(lhs), "rhs": str(rhs)})
        return item

    results = run_all(one, jobs)
    return results, all(r["passed"] for r in results)


def suite_goodbasis(args, fam):
    box = (args.box, args.box)
    patterns = [args.pattern] if args.pattern else list(PATTERNS)
    results = []
    for name in patterns:
        if args.generators == "row0":
            gens, label = (lambda n, m: m == 0), "{(n,0)}"
        else:
            gens, label = GOOD_BASES[name], "table"
        closure = good_basis_closure(gens, PATTERNS[name], box)
        missing = sorted(full_box(box) - closure)
        results.append({
            "pattern": name,
            "generators": label,
            "box": list(box),
            "covers_box": not missing,
            "missing": [list(p) for p in missing[:20]],
            "missing_count": len(missing),
            "passed": not missing,
        })
    return results, all(r["passed"] for r in results)


def suite_oracle(args, fam):
    if not fam.is_symbolic:
        raise ModeError("the oracle suite is symbolic")
    M = args.max if args.max is not None else 3
    use_rec = not fam.is_zero("c")
    jobs = [(n, r, s, cap) for n in range(M + 1) for r in range(M + 1) for s in range(M + 1)
            for cap in range(args.cap + 1)]

    def one(j):
        n, r, s, cap = j
        a = mu_nrs(n, r, s, cap, fam, "paths").body
        b = mu_nrs(n, r, s, cap, fam, "dp").body
        ok = a == b and has_nonnegative_integer_coeffs(a)
        if use_rec:
            ok = ok and mu_nrs(n, r, s, cap, fam, "recurrence").body == a
        if n + r <= M and s <= n + r:
            t = tau_by_paths(n, r, s, cap, fam).body
            ok = ok and t == tau_by_solve(n, r, s, cap, fam)[s].body
        return {"n": n, "r": r, "s": s, "cap": cap, "passed": ok}

    results = run_all(one, jobs)
    return [r for r in results if not r["passed"]] or [{"checked": len(results), "passed": True}], \
        all(r["passed"] for r in results)


def _const_suite(check):
    def suite(args, fam):
        p = const_params(fam)
        results = run_all(lambda n: check(n, p, args.tol), range(args.nmax + 1))
        return results, all(r["passed"] for r in results)
    return suite


def suite_convergence(args, fam):
    if fam.is_symbolic:
        raise ModeError("convergence needs a numeric family")
    rep = cm.convergence_margin(fam)
    return [rep], True


SUITES = {
    "involution": suite_involution,
    "eq2": suite_eq2,
    "goodbasis": suite_goodbasis,
    "oracle": suite_oracle,
    "prop71": _const_suite(cm.check_prop_71),
    "prop73": _const_suite(cm.check_prop_73),
    "hankel": _const_suite(cm.hankel_check),
    "convergence": suite_convergence,
}

CONST_SUITES = ("prop71", "prop73", "hankel")


def cmd_verify(args) -> tuple[str, int]:
    if args.suite in CONST_SUITES and not args.family and not args.const:
        # the standard parameter point
        args.const = True
    if args.tol is None:
        args.tol = 1e-6 if args.suite == "hankel" else 1e-8
    fam = load_family(args)
    _nonneg("cap", args.cap)
    results, passed = SUITES[args.suite](args, fam)
    report = {"suite": args.suite, "passed": passed, "results": results}
    code = 0 if passed else EXIT_FAIL
    if args.format == "text":
        return f"{args.suite}: {'pass' if passed else 'FAIL'} ({len(results)} results)\n", code
    if args.format == "csv":
        flat = [{k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()}
                for r in results]
        return rows_csv(flat), code
    return dump_json(report), code


def cmd_const(args) -> tuple[str, int]:
    if not args.family and not args.const:
        args.const = True
    fam = load_family(args)
    p = const_params(fam, args.tol)
    rows = cm.const_table(args.nmax, p)
    if args.format == "json":
        return dump_json({"params": {"a": p.a, "b": p.b, "c": p.c, "lambda": p.lam},
                          "rows": rows}), 0
    if args.format == "csv":
        return rows_csv(rows), 0
    lines = [f"{r['n']:>3} {r['mu_closed']!r} rel_dev={r['rel_dev']:.3e}" for r in rows]
    return "\n".join(lines) + "\n", 0


# -- parser ----------------------------------------------------------------------------

def _family_args(p):
    p.add_argument("--family", help="family description (JSON file)")
    p.add_argument("--const", action="store_true", help="numeric constant family from --a --b --c --lambda")
    p.add_argument("--a", type=float, default=0.3)
    p.add_argument("--b", type=float, default=0.5)
    p.add_argument("--c", type=float, default=0.2)
    p.add_argument("--lambda", dest="lam", type=float, default=0.7)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rii", description="Moments, dual coefficients and "
                                     "verification suites for R_II polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moment", help="generalized moment mu_{n,r,s}")
    _family_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--cap", type=int)
    p.add_argument("--method", choices=SYMBOLIC_MOMENT + NUMERIC_MOMENT)
    p.add_argument("--tol", type=float, default=1e-15)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("dual", help="dual coefficient tau_{n,r,s}")
    _family_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--cap", type=int)
    p.add_argument("--method", choices=("paths", "solve"))
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("polys", help="P_n, d_n and the leading coefficient of P_n")
    _family_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--all", action="store_true", help="print every k <= n")
    p.set_defaults(func=cmd_polys)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    _family_args(p)
    p.set_defaults(format="json")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--cap", type=int, default=3)
    p.add_argument("--max", type=int)
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--tol", type=float)
    p.add_argument("--pattern", choices=sorted(PATTERNS))
    p.add_argument("--box", type=int, default=8)
    p.add_argument("--generators", choices=("table", "row0"), default="table")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("const", help="table of constant-coefficient moments")
    _family_args(p)
    p.set_defaults(format="csv")
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-15)
    p.set_defaults(func=cmd_const)
    return parser


def run(argv=None) -> tuple[str, str, int]:
    """Run the CLI in-process; returns ``(stdout, stderr, exit_code)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return "", "", int(e.code or 0)
    try:
        out, code = args.func(args)
        return out, "", code
    except (ConfigError, InadmissibleFamily, OutOfDomain, ConvergenceError, ValueError) as e:
        if isinstance(e, (ModeMismatch, UnsupportedNumericClass, UnsupportedPattern)):
            return "", f"rii: {e}\n", EXIT_MODE
        return "", f"rii: {e}\n", EXIT_CONFIG
    except ModeError as e:
        return "", f"rii: {e}\n", EXIT_MODE


def main(argv=None) -> int:
    out, err, code = run(argv)
    try:
        sys.stdout.reconfigure(encoding="utf-8", newline="\n")
        sys.stderr.reconfigure(encoding="utf-8", newline="\n")
    except (AttributeError, ValueError):
        pass
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
