"""Moments when every recurrence coefficient is constant.

With a_m = a, b_m = b, c_m = c, lambda_m = lambda the moments mu_n have a
closed triple sum, satisfy a quadratic functional equation for their
generating function, and coincide (up to the Catalan factor) with moments
of classical and R_I orthogonal polynomials with transformed coefficients.
Everything here is floating point with real parameters and |c| < 1/4.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import Poly, Variable
from .errors import ConvergenceError, ModeMismatch, OutOfDomain
from .families import FamilySpec
from .paths import PathClass

QUARTER = 0.25
DELTA = 0.01
MAX_TERMS = 200000


@dataclass(frozen=True)
class ConstParams:
    a: float
    b: float
    c: float
    lam: float
    tol: float = 1e-15

    def __post_init__(self):
        for name in ("a", "b", "c", "lam", "tol"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    @classmethod
    def from_family(cls, fam: FamilySpec, tol: float = 1e-15) -> "ConstParams":
        vals = fam.constant_values()
        if vals is None:
            raise ModeMismatch("constant-coefficient formulas need a numeric family with constant sequences")
        return cls(vals["a"], vals["b"], vals["c"], vals["lambda"], tol)

    def abs(self) -> "ConstParams":
        return ConstParams(abs(self.a), abs(self.b), abs(self.c), abs(self.lam), self.tol)


def _root(c: float) -> float:
    if not c < QUARTER:
        raise OutOfDomain(f"c = {c} is not below 1/4")
    return math.sqrt(1.0 - 4.0 * c)


def _check_abs(c: float):
    if not abs(c) < QUARTER:
        raise OutOfDomain(f"|c| = {abs(c)} is not below 1/4")


def catalan_gf(c: float) -> float:
    """Sum of C_k c^k, i.e. (1 - sqrt(1-4c)) / (2c), with value 1 at c = 0."""
    # rationalized form; no cancellation near c = 0
    return 2.0 / (1.0 + _root(c))


def ratio_bound(c: float) -> float:
    q = 4.0 * abs(c) * (1.0 + DELTA)
    if q >= 1.0:
        q = (1.0 + 4.0 * abs(c)) / 2.0
    return q


def closed_form_coefficient(n: int, i: int, j: int, k: int) -> int:
    """Number of paths to (n, 0) with i D, j V and k B steps."""
    m = n - 2 * i - j
    if min(i, j, k, m) < 0:
        return 0
    N = i + j + k
    catalan = math.comb(2 * N, N) // (N + 1)
    return catalan * math.comb(n + j + 2 * k, m) * math.comb(N, j) * math.comb(i + k, i)


def mu_const_closed_with_bound(n: int, params: ConstParams) -> tuple[float, float]:
    """Closed-sum value of mu_n and a bound on the discarded k-tails."""
    _check_abs(params.c)
    total, bound, _, ok = kernels.const_moment_sum(
        n, params.a, params.b, params.c, params.lam, ratio_bound(params.c), params.tol, MAX_TERMS
    )
    if not ok:
        raise ConvergenceError(f"k-series for mu_{n} did not settle within {MAX_TERMS} terms")
    return total, bound


def mu_const_closed(n: int, params: ConstParams) -> float:
    return mu_const_closed_with_bound(n, params)[0]


def k_series(n: int, i: int, j: int, params: ConstParams, extra: int = 0):
    """One (i, j) slice of the closed sum.

    Returns ``(partial_sum, tail_bound, stop_k, extra_terms)`` where
    ``extra_terms`` are the next ``extra`` terms past the stopping point,
    summed explicitly, for checking the bound.
    """
    _check_abs(params.c)
    q = ratio_bound(params.c)
    c = params.c
    m = n - 2 * i - j
    if m < 0:
        raise ValueError("need 2i + j <= n")
    t = float(closed_form_coefficient(n, i, j, 0)) * params.b ** m * params.lam ** i * params.a ** j

    def ratio(k):
        N, A = i + j + k, n + j + 2 * k
        return (c * (2.0 * (2 * N + 1) / (N + 2))
                * ((A + 2.0) * (A + 1.0) / ((A + 2.0 - m) * (A + 1.0 - m)))
                * ((N + 1.0) / (k + 1.0)))

    s, k, tail = t, 0, 0.0
    while c != 0.0 and t != 0.0:
        r = ratio(k)
        t *= r
        k += 1
        s += t
        if abs(r) <= q:
            tail = abs(t) * q / (1.0 - q)
            if tail <= params.tol * abs(s) or tail < sys.float_info.min:
                break
        if k >= MAX_TERMS:
            raise ConvergenceError("k-series did not settle")
    more = 0.0
    for _ in range(extra):
        if c == 0.0 or t == 0.0:
            break
        t *= ratio(k)
        k += 1
        more += abs(t)
    return s, tail, k, more


def mu_gf_coeffs(N: int, params: ConstParams) -> list:
    """mu_0..mu_N from the quadratic functional equation of the generating function."""
    _check_abs(params.c)
    return list(kernels.gf_coefficients(
        N, params.a, params.b, params.c, params.lam, catalan_gf(params.c), _root(params.c)
    ))


@dataclass(frozen=True)
class TransformedFamily:
    """Recurrence data constant from the second index on.

    ``B0``/``B`` are the H weights at height 0 / above; ``Lambda1``/``Lambda``
    the D weights from height 1 / above; ``A1``/``A`` likewise for V.
    """

    B0: float
    B: float
    Lambda1: float
    Lambda: float
    A1: float | None = None
    A: float | None = None

    def B_at(self, h: int) -> float:
        return self.B0 if h == 0 else self.B

    def Lambda_at(self, h: int) -> float:
        return 0.0 if h == 0 else self.Lambda1 if h == 1 else self.Lambda

    def A_at(self, h: int) -> float:
        if self.A1 is None:
            return 0.0
        return 0.0 if h == 0 else self.A1 if h == 1 else self.A


def _kappa_classical(p: ConstParams) -> float:
    return p.b * p.b * p.c + p.a * p.a + p.a * p.b - 4.0 * p.c * p.lam + p.lam


def _kappa_r1(p: ConstParams) -> float:
    return p.b * p.b * p.c - 4.0 * p.c * p.lam + p.lam


def classical_transform(params: ConstParams) -> TransformedFamily:
    p = params
    if p.c == 0.0:
        K = p.a * p.a + p.a * p.b + p.lam
        return TransformedFamily(p.a + p.b, 2.0 * p.a + p.b, K, K)
    s = _root(p.c)
    C = catalan_gf(p.c)
    K = _kappa_classical(p)
    return TransformedFamily(
        B0=(C * p.a + p.b) / s,
        B=(2.0 * p.a + p.b) / s ** 2,
        Lambda1=K * C / s ** 3,
        Lambda=K / s ** 4,
    )


def r1_transform(params: ConstParams) -> TransformedFamily:
    p = params
    if p.c == 0.0:
        return TransformedFamily(p.b, p.b, p.lam, p.lam, p.a, p.a)
    s = _root(p.c)
    C = catalan_gf(p.c)
    K = _kappa_r1(p)
    return TransformedFamily(
        B0=p.b / s,
        B=p.b / s ** 2,
        Lambda1=K * C / s ** 3,
        Lambda=K / s ** 4,
        A1=C * p.a / s,
        A=p.a / s ** 2,
    )


def weighted_path_moments(cls, family: TransformedFamily, n: int) -> float:
    """Weighted sum of Motzkin (or Motzkin-Schroeder) paths from (0,0) to (n,0)."""
    if isinstance(cls, str):
        cls = PathClass.parse(cls)
    if cls not in (PathClass.Motzkin, PathClass.MotzkinSchroeder):
        raise ValueError("only Motzkin and Motzkin-Schroeder paths have a finite moment DP")
    size = n + 2
    B = [family.B_at(h) for h in range(size)]
    Lam = [family.Lambda_at(h) for h in range(size)]
    A = [family.A_at(h) for h in range(size)] if cls is PathClass.MotzkinSchroeder else None
    return kernels.motzkin_moment(n, B, Lam, A)


def _rel(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0.0 else abs(x - y) / scale


def _check_transform(n, params, tol, transform, cls):
    closed = mu_const_closed(n, params)
    via = catalan_gf(params.c) * weighted_path_moments(cls, transform(params), n)
    dev = _rel(closed, via)
    return {"n": n, "mu_closed": closed, "mu_transform": via, "rel_dev": dev, "passed": dev <= tol}


def check_prop_71(n: int, params: ConstParams, tol: float = 1e-8) -> dict:
    """mu_n against the Catalan factor times classical moments of the transform."""
    return _check_transform(n, params, tol, classical_transform, "Motzkin")


def check_prop_73(n: int, params: ConstParams, tol: float = 1e-8) -> dict:
    """mu_n against the Catalan factor times R_I moments of the transform."""
    return _check_transform(n, params, tol, r1_transform, "MotzkinSchroeder")


def hankel_closed_form(n: int, params: ConstParams) -> float:
    s = _root(params.c)
    K = _kappa_classical(params)
    return K ** math.comb(n + 1, 2) * catalan_gf(params.c) ** (2 * n + 1) / s ** math.comb(2 * n + 1, 2)


def hankel_check(n: int, params: ConstParams, tol: float = 1e-6) -> dict:
    mu = mu_gf_coeffs(2 * n, params)
    H = np.array([[mu[i + j] for j in range(n + 1)] for i in range(n + 1)], dtype=float)
    det = float(np.linalg.det(H))
    cond = float(np.linalg.cond(H))
    closed = hankel_closed_form(n, params)
    dev = _rel(det, closed)
    return {"n": n, "det": det, "closed_form": closed, "rel_dev": dev, "cond": cond,
            "passed": dev <= tol}


def convergence_margin(fam: FamilySpec) -> dict:
    if fam.mode != "numeric":
        raise ModeMismatch("convergence_margin needs a numeric family")
    seqs = fam.sequences
    sup_c = seqs["c"].sup_abs()
    margin = QUARTER - sup_c
    bounded = {f: seqs[f].bounded for f in ("a", "b", "lambda")}
    c_ok = margin > 0
    return {
        "sup_abs_c": sup_c,
        "margin": margin,
        "bounded": bounded,
        "mu": "converges" if c_ok and all(bounded.values()) else "not guaranteed",
        "tau": "converges" if c_ok else "not guaranteed",
    }


# -- exact series used as oracles for the collapsed symbolic moments ---------

def catalan_series(cap: int) -> Poly:
    """Sum of C_k c1^k for k <= cap."""
    return Poly({(_c1(),) * k: math.comb(2 * k, k) // (k + 1) for k in range(cap + 1)})


def inv_sqrt_series(cap: int) -> Poly:
    """Series of 1/sqrt(1 - 4 c1): sum of binom(2k, k) c1^k."""
    return Poly({(_c1(),) * k: math.comb(2 * k, k) for k in range(cap + 1)})


def _c1() -> int:
    return Variable("c", 1).code


def const_table(N: int, params: ConstParams) -> list:
    """Rows of mu_n by four routes, with deviations from the closed sum."""
    gf = mu_gf_coeffs(N, params)
    C = catalan_gf(params.c)
    ct = classical_transform(params)
    rt = r1_transform(params)
    rows = []
    for n in range(N + 1):
        closed = mu_const_closed(n, params)
        cl = C * weighted_path_moments("Motzkin", ct, n)
        r1 = C * weighted_path_moments("MotzkinSchroeder", rt, n)
        devs = [abs(v - closed) for v in (gf[n], cl, r1)]
        rows.append({
            "n": n,
            "mu_closed": closed,
            "mu_gf": gf[n],
            "mu_transform_classical": cl,
            "mu_transform_r1": r1,
            "abs_dev": max(devs),
            "rel_dev": max(_rel(v, closed) for v in (gf[n], cl, r1)),
        })
    return rows


__all__ = [
    "ConstParams", "TransformedFamily", "catalan_gf", "ratio_bound", "closed_form_coefficient",
    "mu_const_closed", "mu_const_closed_with_bound", "k_series", "mu_gf_coeffs",
    "classical_transform", "r1_transform", "weighted_path_moments", "check_prop_71",
    "check_prop_73", "hankel_closed_form", "hankel_check", "convergence_margin",
    "catalan_series", "inv_sqrt_series", "const_table",
]
