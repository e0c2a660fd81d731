"""Generalized moments mu_{n,r,s} and dual coefficients tau_{n,r,s}.

Moments are computed three ways: directly as weighted path sums (by
enumeration or dynamic programming), or from the recurrences that link
neighbouring moments, seeded only with the path values of mu_{n,0} and
mu_{1,1}. Dual coefficients come either from restricted path sums or from
expanding x^n P_r(x) in the basis P_0, P_1, ... by repeated leading-term
division.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .algebra import Poly, TruncatedSeries, Variable, series_invert
from .errors import InternalInconsistency, ModeMismatch, UnsupportedPattern
from .families import SYMBOLIC, FamilySpec, compute_P, leading_coeff
from .paths import PathClass, path_sum

MOMENT_METHODS = ("paths", "dp", "recurrence")
DUAL_METHODS = ("paths", "solve")


def mu_base_row(n: int, cap: int | None, fam: FamilySpec = SYMBOLIC) -> TruncatedSeries:
    """mu_{n,0,0}, the normalization row fixed by path values."""
    return path_sum(PathClass.R2, n, 0, 0, cap, fam, method="dp")


def _require_recurrence(fam: FamilySpec):
    if fam.mode != "symbolic":
        raise ModeMismatch("the moment recurrence runs on symbolic families only")
    if fam.is_zero("c"):
        raise UnsupportedPattern("c is identically zero; use path sums instead")


def mu_by_recurrence(n: int, m: int, cap: int | None, fam: FamilySpec = SYMBOLIC) -> TruncatedSeries:
    """mu_{n,0,m} from the two-index recurrence solved for the c_m term."""
    _require_recurrence(fam)
    if cap is None:
        raise ValueError("the recurrence needs a finite cap")
    return TruncatedSeries(_mu_rec(fam, n, m, cap), cap)


@lru_cache(maxsize=None)
def _mu_rec(fam: FamilySpec, n: int, m: int, cap: int) -> Poly:
    if m < 0 or n < m:
        return Poly.zero()
    if m == 0:
        return mu_base_row(n, cap, fam).body
    if n == 1:
        return path_sum(PathClass.R2, 1, 0, 1, cap, fam, method="dp").body
    up = cap + 1
    rhs = _mu_rec(fam, n - 1, m - 1, up)
    rhs = rhs - fam.coef("b", m - 1).mul_trunc(_mu_rec(fam, n - 2, m - 1, cap), up)
    rhs = rhs - _mu_rec(fam, n - 2, m - 2, up)
    rhs = rhs - fam.coef("a", m).mul_trunc(_mu_rec(fam, n - 1, m, cap), up)
    rhs = rhs - fam.coef("lambda", m).mul_trunc(_mu_rec(fam, n - 2, m, cap), up)
    quotient, remainder = rhs.truncate(up).divide_by_variable(Variable("c", m))
    if remainder:
        raise InternalInconsistency(
            f"mu_{{{n},{m}}}: right side not divisible by c_{m}; remainder {remainder}"
        )
    return quotient.truncate(cap)


def mu_nrs(n: int, r: int, s: int, cap: int | None, fam: FamilySpec = SYMBOLIC,
           method: str = "dp") -> TruncatedSeries:
    """mu_{n,r,s} by path enumeration, path DP, or the recurrences."""
    if method in ("paths", "dp"):
        return path_sum(PathClass.R2, n, r, s, cap, fam, method=method)
    if method != "recurrence":
        raise ValueError(f"unknown moment method {method!r}")
    if fam.mode != "symbolic":
        raise ModeMismatch("the moment recurrence runs on symbolic families only")
    if cap is None:
        raise ValueError("the recurrence needs a finite cap")
    if min(n, r, s) < 0:
        return TruncatedSeries(Poly.zero(), cap)
    return TruncatedSeries(_mu_r(fam, n, r, s, cap), cap)


@lru_cache(maxsize=None)
def _mu_r(fam: FamilySpec, n: int, r: int, s: int, cap: int) -> Poly:
    if r == 0:
        if fam.is_zero("c"):
            return path_sum(PathClass.R2, n, 0, s, cap, fam, method="dp").body
        return _mu_rec(fam, n, s, cap)
    k = r - 1
    out = _mu_r(fam, n + 1, k, s, cap)
    out = out - fam.coef("b", k).mul_trunc(_mu_r(fam, n, k, s, cap), cap)
    if k >= 1:
        out = out - fam.coef("c", k).mul_trunc(_mu_r(fam, n + 2, k - 1, s, cap), cap)
        out = out - fam.coef("a", k).mul_trunc(_mu_r(fam, n + 1, k - 1, s, cap), cap)
        out = out - fam.coef("lambda", k).mul_trunc(_mu_r(fam, n, k - 1, s, cap), cap)
    return out


def tau_by_paths(n: int, r: int, s: int, cap: int | None, fam: FamilySpec = SYMBOLIC,
                 method: str = "dp") -> TruncatedSeries:
    """tau_{n,r,s} as a restricted path sum."""
    return path_sum(PathClass.RestrictedR2, n, r, s, cap, fam, method=method)


def tau_by_solve(n: int, r: int, s_max: int | None, cap: int | None,
                 fam: FamilySpec = SYMBOLIC) -> dict:
    """Coefficients of x^n P_r(x) in the basis P_0, P_1, ..., as ``{s: series}``.

    The top x-degree is peeled off repeatedly, dividing by the leading
    coefficient of P_k as a power series modulo degree > cap.
    """
    top = n + r
    if s_max is None:
        s_max = top
    rest = compute_P(r, fam).shift(n).truncate(cap)
    out = {}
    for k in range(top, -1, -1):
        ck = rest.coeff(k)
        if ck:
            inv = series_invert(leading_coeff(k, fam), cap)
            tk = ck.mul_trunc(inv.body, cap)
            rest = (rest - compute_P(k, fam).mul(tk, cap)).truncate(cap)
        else:
            tk = Poly.zero()
        out[k] = TruncatedSeries(tk, cap)
    if rest:
        raise InternalInconsistency(f"expansion of x^{n} P_{r} left remainder {rest}")
    return {s: out.get(s, TruncatedSeries(Poly.zero(), cap)) for s in range(s_max + 1)}


def duality_sides(n: int, r: int, l: int, cap: int | None, fam: FamilySpec = SYMBOLIC):
    """Both sides of mu_{n,r,l} = sum_s tau_{n,r,s} mu_{0,s,l}."""
    lhs = mu_nrs(n, r, l, cap, fam, method="dp").body
    rhs = Poly.zero()
    for s in range(n + r + 1):
        t = tau_by_paths(n, r, s, cap, fam).body
        if not t:
            continue
        rhs = rhs + t.mul_trunc(mu_nrs(0, s, l, cap, fam, method="dp").body, cap)
    return lhs, rhs.truncate(cap)


def check_duality_identity(n: int, r: int, l: int, cap: int | None,
                           fam: FamilySpec = SYMBOLIC) -> bool:
    lhs, rhs = duality_sides(n, r, l, cap, fam)
    return lhs == rhs


def has_nonnegative_integer_coeffs(p: Poly) -> bool:
    return all(c == int(c) and c >= 0 for c in p.terms.values())


class MomentTable:
    """mu_{n,r,s} for a box of indices, filled once and then read-only."""

    def __init__(self, cap: int, fam: FamilySpec = SYMBOLIC, method: str = "dp"):
        self.cap = cap
        self.fam = fam
        self.method = method
        self.entries: dict = {}

    def fill(self, triples: Iterable[tuple[int, int, int]]) -> "MomentTable":
        for n, r, s in triples:
            self.entries[(n, r, s)] = mu_nrs(n, r, s, self.cap, self.fam, self.method)
        return self

    def __getitem__(self, key):
        return self.entries[key]

    def violations(self) -> list:
        """Entries breaking the vanishing and normalization invariants."""
        bad = []
        for (n, r, s), v in sorted(self.entries.items()):
            if r == 0 and n < s and v.body:
                bad.append(((n, r, s), "nonzero below the diagonal"))
            if (n, r, s) == (0, 0, 0) and v.body.constant_term != 1:
                bad.append(((n, r, s), "constant term is not 1"))
        return bad


class DualTable:
    """tau_{n,r,s} for a box of indices."""

    def __init__(self, cap: int, fam: FamilySpec = SYMBOLIC, method: str = "paths"):
        self.cap = cap
        self.fam = fam
        self.method = method
        self.entries: dict = {}

    def fill(self, pairs: Iterable[tuple[int, int]], s_max: int | None = None) -> "DualTable":
        for n, r in pairs:
            top = n + r if s_max is None else s_max
            if self.method == "solve":
                row = tau_by_solve(n, r, top, self.cap, self.fam)
                for s, v in row.items():
                    self.entries[(n, r, s)] = v
            else:
                for s in range(top + 1):
                    self.entries[(n, r, s)] = tau_by_paths(n, r, s, self.cap, self.fam)
        return self

    def __getitem__(self, key):
        return self.entries[key]

    def violations(self) -> list:
        bad = []
        for (n, r, s), v in sorted(self.entries.items()):
            if s > n + r and v.body:
                bad.append(((n, r, s), "nonzero above the top index"))
            if s == n + r and v.body.constant_term != 1:
                bad.append(((n, r, s), "top coefficient constant term is not 1"))
        return bad


def clear_caches():
    _mu_rec.cache_clear()
    _mu_r.cache_clear()


__all__ = [
    "MOMENT_METHODS", "DUAL_METHODS", "mu_base_row", "mu_by_recurrence", "mu_nrs",
    "tau_by_paths", "tau_by_solve", "duality_sides", "check_duality_identity",
    "has_nonnegative_integer_coeffs", "MomentTable", "DualTable", "clear_caches",
]
