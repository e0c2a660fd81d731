from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from rii.algebra import Poly, PolyInX, parse_poly
from rii.errors import ModeMismatch, UnsupportedPattern
from rii.families import SYMBOLIC, FamilySpec, compute_P
from rii.functional import (
    DualTable,
    MomentTable,
    check_duality_identity,
    mu_base_row,
    mu_by_recurrence,
    mu_nrs,
    tau_by_paths,
    tau_by_solve,
)

P = parse_poly
CLASSICAL = FamilySpec.symbolic({"c", "a"})


def series(coeffs, var, cap):
    """sum coeffs[k] * var^k, truncated."""
    out = Poly.zero()
    for k, c in enumerate(coeffs):
        out = out + var.pow_trunc(k, cap).scale(c)
    return out.truncate(cap)


def catalan(cap):
    return series([Fraction(comb(2 * k, k), k + 1) for k in range(cap + 1)], P("c1"), cap)


def inv_sqrt(cap):
    return series([comb(2 * k, k) for k in range(cap + 1)], P("c1"), cap)


# -- moments -----------------------------------------------------------------------

def test_base_row():
    assert mu_base_row(0, 2).body == P("1 + c1 + c1^2 + c1*c2")
    assert mu_base_row(1, 1).body == P("b0 + a1")
    for cap in (None, 2, 5):
        assert mu_base_row(2, cap, CLASSICAL).body == P("b0^2 + l1")


def test_first_off_diagonal_moment():
    assert mu_nrs(1, 0, 1, 1).body == P("1 + c1 + c2")
    for method in ("paths", "dp", "recurrence"):
        assert mu_nrs(1, 0, 1, 1, method=method).body == P("1 + c1 + c2")


@pytest.mark.parametrize("method", ["paths", "dp", "recurrence"])
def test_below_diagonal_vanishes(method):
    for n in range(4):
        for m in range(n + 1, 6):
            assert mu_nrs(n, 0, m, 4, method=method).body.is_zero()


def test_c_part_of_mu21():
    m = mu_nrs(2, 0, 1, 2).body.collapse().homogeneous_part(2)
    c1 = P("c1").sorted_terms()[0][0][0]
    assert Poly({k: v for k, v in m.terms.items() if c1 in k}) == P("10*a1*c1 + 8*b0*c1")


def test_catalan_square_example():
    assert mu_nrs(1, 0, 1, 2).body.collapse() == P("1 + 2*c1 + 5*c1^2")


def test_obstruction_moments():
    # mu_{0,1,0} against the Taylor series of C^2 (a + 2bc) / sqrt(1 - 4c)
    cap = 3
    C = catalan(cap)
    ref = C.mul_trunc(C, cap).mul_trunc(P("a1 + 2*b0*c1"), cap).mul_trunc(inv_sqrt(cap), cap)
    m010 = mu_nrs(0, 1, 0, cap).body.collapse()
    assert m010 == ref
    m021 = mu_nrs(0, 2, 1, cap).body.collapse()
    assert m021 == ref.mul_trunc(C.scale(2) - Poly.one(), cap)


def test_recurrence_needs_c():
    with pytest.raises(UnsupportedPattern):
        mu_by_recurrence(2, 1, 3, FamilySpec.symbolic({"c"}))
    with pytest.raises(ModeMismatch):
        mu_by_recurrence(2, 1, 3, FamilySpec.constant(1, 1, Fraction(1, 10), 1))
    with pytest.raises(ValueError):
        mu_nrs(2, 0, 1, 3, method="magic")


# -- dual coefficients ---------------------------------------------------------------

def test_first_dual_coefficients():
    assert tau_by_paths(1, 0, 1, 5).body == Poly.one()
    assert tau_by_paths(1, 0, 0, 5).body == P("b0")
    row = tau_by_solve(1, 0, 1, 5)
    assert row[1].body == Poly.one() and row[0].body == P("b0")


def test_top_coefficient_of_x_cubed():
    # 1/(1 - c1 - c2) to degree 2; (c1 + c2)^2 carries 2*c1*c2
    assert tau_by_paths(3, 0, 3, 2).body == P("1 + c1 + c2 + c1^2 + 2*c1*c2 + c2^2")


A = P("a1 + a2 + b0 + b1 + b2 - b2*c1 - b0*c2")
B = P(
    "a2*b0*c1 + b0*b1*c1 - a1*b0*c2 - b0^2*c2 - b0*b1*c2 + a1^2 + a1*a2 + 2*a1*b0"
    " + b0^2 + 2*a1*b1 + a2*b1 + b0*b1 + b1^2 - c1*l1 - c1*l2 + l1 + l2"
)
C = P(
    "a2*b0^2*c1 + b0^2*b1*c1 - a1*b0^2*c2 - b0^3*c2 + a1^2*b0 + a1*a2*b0 + 2*a1*b0^2 + b0^3"
    " + a1*b0*b1 - b0*c1*l1 - b0*c2*l1 + a1*l1 + a2*l1 + 2*b0*l1 + b1*l1"
)


@pytest.mark.parametrize("method", ["paths", "solve"])
def test_x_cubed_rational_expansion(method):
    cap = 5
    den = P("1 - c1 - c2").mul_trunc(P("1 - c1"), cap)
    if method == "paths":
        tau = {s: tau_by_paths(3, 0, s, cap).body for s in range(4)}
    else:
        tau = {s: v.body for s, v in tau_by_solve(3, 0, 3, cap).items()}
    assert tau[3].mul_trunc(P("1 - c1 - c2"), cap) == Poly.one()
    for s, numer in ((2, A), (1, B), (0, C)):
        assert tau[s].mul_trunc(den, cap) == numer


def test_vanishing_above_top():
    for n, r in ((2, 1), (0, 2), (3, 0)):
        for s in range(n + r + 1, n + r + 4):
            assert tau_by_paths(n, r, s, 3).body.is_zero()
        assert set(tau_by_solve(n, r, n + r + 2, 3)) == set(range(n + r + 3))
        assert tau_by_solve(n, r, n + r + 2, 3)[n + r + 2].body.is_zero()


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 4))
def test_solve_reconstructs_the_product(n, r, cap):
    row = tau_by_solve(n, r, None, cap)
    total = PolyInX.zero()
    for s, t in row.items():
        total = total + compute_P(s).mul(t.body, cap)
    assert total.truncate(cap) == compute_P(r).shift(n).truncate(cap)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_moment_methods_agree(n, r, s, cap):
    a = mu_nrs(n, r, s, cap, method="paths").body
    assert a == mu_nrs(n, r, s, cap, method="dp").body == mu_nrs(n, r, s, cap, method="recurrence").body


# -- duality identity ------------------------------------------------------------------

@pytest.mark.parametrize("n,r,l,cap", [(1, 0, 0, 2), (0, 0, 0, 3), (3, 0, 1, 3)])
def test_duality_examples(n, r, l, cap):
    assert check_duality_identity(n, r, l, cap)


def test_duality_with_zero_pattern():
    fam = FamilySpec.symbolic({"c"})
    for n in range(3):
        for r in range(3):
            for l in range(3):
                assert check_duality_identity(n, r, l, None, fam)


# -- tables ----------------------------------------------------------------------------

def test_tables_and_violations():
    mt = MomentTable(3).fill((n, r, s) for n in range(3) for r in range(3) for s in range(3))
    assert mt.violations() == []
    assert mt[(1, 0, 1)].body == mu_nrs(1, 0, 1, 3).body
    dt = DualTable(3).fill([(n, r) for n in range(3) for r in range(3)], s_max=5)
    ds = DualTable(3, method="solve").fill([(n, r) for n in range(3) for r in range(3)], s_max=5)
    assert dt.violations() == ds.violations() == []
    assert dt.entries == ds.entries


def test_classical_tables_coincide():
    mt = MomentTable(None, CLASSICAL).fill(
        (n, r, s) for n in range(4) for r in range(4) for s in range(n + r + 1))
    dt = DualTable(None, CLASSICAL).fill((n, r) for n in range(4) for r in range(4))
    for key, v in dt.entries.items():
        assert mt[key] == v
