"""Time the compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--format text|json]

Each kernel is called with identical inputs on both backends. The end-to-end
rows run a fresh interpreter per backend, so they include the whole library
stack above the kernels.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

from rii import kernels
from rii.algebra import parse_poly
from rii.constmoments import ConstParams, _root, catalan_gf, classical_transform, ratio_bound

END_TO_END = {
    "mu_nrs(5,2,1,cap=6)": "from rii.functional import mu_nrs; mu_nrs(5, 2, 1, 6, method='dp')",
    "tau_by_solve(4,2,cap=5)": "from rii.functional import tau_by_solve; tau_by_solve(4, 2, None, 5)",
}


def kernel_cases():
    p = parse_poly("1 + c1 + c2 + a1 + b0 + l1 + a2*b1 + c1*l2").pow_trunc(4, 8).terms
    q = parse_poly("b0 + b1 + c3 + l1*c1").pow_trunc(3, 8).terms
    key, coeff = next(iter(parse_poly("3*a1*c2").terms.items()))
    pt = ConstParams(0.3, 0.5, 0.2, 0.7, tol=1e-15)
    t = classical_transform(pt)
    B = [t.B_at(h) for h in range(42)]
    L = [t.Lambda_at(h) for h in range(42)]
    root = _root(pt.c)
    return {
        "mul_terms": lambda k: k.mul_terms(p, q, 8),
        "mul_monomial": lambda k: k.mul_monomial(p, key, coeff, 8),
        "const_moment_sum(n=12)": lambda k: k.const_moment_sum(
            12, pt.a, pt.b, pt.c, pt.lam, ratio_bound(pt.c), pt.tol, 100000),
        "motzkin_moment(n=40)": lambda k: k.motzkin_moment(40, B, L, None),
        "gf_coefficients(N=200)": lambda k: k.gf_coefficients(
            200, pt.a, pt.b, pt.c, pt.lam, catalan_gf(pt.c), root),
    }


def best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def subprocess_time(stmt, pure, repeat):
    env = dict(os.environ, RII_PURE_PYTHON="1" if pure else "0")
    code = (f"import timeit; print(min(timeit.repeat({stmt!r}, repeat={repeat}, number=1)))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--no-end-to-end", action="store_true")
    args = ap.parse_args(argv)

    if kernels.compiled_backend is None:
        print("compiled extension not available; build it with pip install -e . --no-build-isolation",
              file=sys.stderr)
        return 1
    rows = []
    for name, fn in kernel_cases().items():
        py = best(lambda: fn(kernels.python_backend), args.repeat)
        cy = best(lambda: fn(kernels.compiled_backend), args.repeat)
        rows.append({"case": name, "python_s": py, "compiled_s": cy, "speedup": py / cy})
    if not args.no_end_to_end:
        for name, stmt in END_TO_END.items():
            py = subprocess_time(stmt, True, args.repeat)
            cy = subprocess_time(stmt, False, args.repeat)
            rows.append({"case": name, "python_s": py, "compiled_s": cy, "speedup": py / cy})

    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'case':<26}{'python':>12}{'compiled':>12}{'speedup':>9}")
        for r in rows:
            print(f"{r['case']:<26}{r['python_s'] * 1e3:>10.3f}ms{r['compiled_s'] * 1e3:>10.3f}ms"
                  f"{r['speedup']:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
