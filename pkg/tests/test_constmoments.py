import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rii.algebra import Variable
from rii.constmoments import (
    ConstParams,
    catalan_gf,
    check_prop_71,
    check_prop_73,
    classical_transform,
    closed_form_coefficient,
    const_table,
    convergence_margin,
    hankel_check,
    hankel_closed_form,
    k_series,
    mu_const_closed,
    mu_const_closed_with_bound,
    mu_gf_coeffs,
    r1_transform,
    weighted_path_moments,
)
from rii.errors import ModeMismatch, OutOfDomain
from rii.families import SYMBOLIC, FamilySpec
from rii.functional import mu_nrs
from rii.paths import PathClass, enumerate_paths

POINT = ConstParams(0.3, 0.5, 0.2, 0.7)


def rel(x, y):
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def test_catalan_values():
    assert catalan_gf(0.0) == 1.0
    assert catalan_gf(0.2) == pytest.approx((1 - math.sqrt(0.2)) / 0.4, rel=1e-15)
    assert catalan_gf(0.25 - 1e-12) == pytest.approx(2.0, abs=1e-5)
    assert catalan_gf(-0.1) == pytest.approx((1 - math.sqrt(1.4)) / -0.2, rel=1e-15)
    with pytest.raises(OutOfDomain):
        catalan_gf(0.25)


def test_closed_sum_small_cases():
    assert mu_const_closed(0, POINT) == pytest.approx(catalan_gf(0.2), rel=1e-14)
    assert mu_const_closed(1, ConstParams(0.3, 0.5, 0.0, 0.7)) == pytest.approx(0.8)
    assert rel(mu_const_closed(2, POINT), mu_gf_coeffs(2, POINT)[2]) < 1e-10


def test_degenerate_parameters():
    p = ConstParams(0.0, 0.0, 0.15, 0.0)
    for n in range(1, 6):
        assert mu_const_closed(n, p) == 0.0
        assert mu_gf_coeffs(5, p)[n] == pytest.approx(0.0, abs=1e-15)
    q = ConstParams(0.0, 0.5, 0.0, 0.7)
    assert mu_const_closed(1, q) == pytest.approx(0.5)
    assert mu_const_closed(2, q) == pytest.approx(0.25 + 0.7)


def test_closed_and_gf_agree():
    gf = mu_gf_coeffs(12, POINT)
    for n in range(13):
        assert rel(mu_const_closed(n, POINT), gf[n]) < 1e-8


def test_outside_domain():
    with pytest.raises(OutOfDomain):
        mu_const_closed(2, ConstParams(0.1, 0.1, 0.3, 0.1))
    with pytest.raises(OutOfDomain):
        mu_gf_coeffs(2, ConstParams(0.1, 0.1, -0.3, 0.1))


def test_classical_transform_values():
    a, b, c, lam = 0.3, 0.5, 0.2, 0.7
    t = classical_transform(POINT)
    K = b * b * c + a * a + a * b - 4 * c * lam + lam
    assert t.B_at(3) == pytest.approx((2 * a + b) / (1 - 4 * c))
    assert t.Lambda_at(4) == pytest.approx(K / (1 - 4 * c) ** 2)
    t0 = classical_transform(ConstParams(a, b, 0.0, lam))
    assert t0.B_at(0) == pytest.approx(a + b)


def test_r1_transform_values():
    a, b, c = 0.3, 0.5, 0.2
    t = r1_transform(POINT)
    assert t.B_at(0) == pytest.approx(b / math.sqrt(1 - 4 * c))
    assert t.A_at(5) == pytest.approx(a / (1 - 4 * c))
    t0 = r1_transform(ConstParams(a, b, 0.0, 0.7))
    assert (t0.A_at(1), t0.B_at(0), t0.Lambda_at(1)) == pytest.approx((a, b, 0.7))


def test_small_weighted_moments():
    t = classical_transform(POINT)
    B0, B1, L1 = t.B_at(0), t.B_at(1), t.Lambda_at(1)
    assert weighted_path_moments("Motzkin", t, 2) == pytest.approx(B0 ** 2 + L1)
    assert weighted_path_moments("Motzkin", t, 3) == pytest.approx(B0 ** 3 + 2 * B0 * L1 + B1 * L1)
    r = r1_transform(POINT)
    assert weighted_path_moments(PathClass.MotzkinSchroeder, r, 1) == pytest.approx(r.B_at(0) + r.A_at(1))


def test_functional_equation_checks():
    for n in range(13):
        assert check_prop_71(n, POINT)["passed"]
        assert check_prop_73(n, POINT)["passed"]


def brute_force(cls, n, a, b, lam):
    """Numeric moment of a B-free class by listing its paths."""
    total = 0.0
    weights = {"H": b, "D": lam, "V": a, "U": 1.0}
    for p in enumerate_paths(cls, n, 0, 0, None):
        w = 1.0
        for s in p.steps:
            w *= weights[s]
        total += w
    return total


@pytest.mark.parametrize("n", range(7))
def test_c_zero_reductions(n):
    p = ConstParams(0.3, 0.5, 0.0, 0.7)
    assert catalan_gf(0.0) == 1.0
    want = brute_force(PathClass.MotzkinSchroeder, n, 0.3, 0.5, 0.7)
    assert mu_const_closed(n, p) == pytest.approx(want, rel=1e-13)
    assert weighted_path_moments("MotzkinSchroeder", r1_transform(p), n) == pytest.approx(want, rel=1e-13)
    schroeder = ConstParams(0.3, 0.5, 0.0, 0.0)
    want = brute_force(PathClass.Schroeder, n, 0.3, 0.5, 0.0)
    assert mu_const_closed(n, schroeder) == pytest.approx(want, rel=1e-13, abs=1e-300)
    assert mu_gf_coeffs(n, schroeder)[n] == pytest.approx(want, rel=1e-13, abs=1e-300)


def test_hankel_small():
    assert hankel_closed_form(0, POINT) == pytest.approx(catalan_gf(0.2), rel=1e-14)
    mu = mu_gf_coeffs(2, POINT)
    a, b, c, lam = 0.3, 0.5, 0.2, 0.7
    K = b * b * c + a * a + a * b - 4 * c * lam + lam
    want = K * catalan_gf(c) ** 3 / (1 - 4 * c) ** 1.5
    assert mu[0] * mu[2] - mu[1] ** 2 == pytest.approx(want, rel=1e-10)
    for n in range(6):
        rep = hankel_check(n, POINT)
        assert rep["passed"] and rep["cond"] >= 1


def test_convergence_margin():
    rep = convergence_margin(FamilySpec.constant(0.3, 0.5, 0.2, 0.7))
    assert rep["margin"] == pytest.approx(0.05)
    assert rep["mu"] == rep["tau"] == "converges"
    rep = convergence_margin(FamilySpec.constant(0.3, 0.5, 0.3, 0.7))
    assert rep["mu"] == rep["tau"] == "not guaranteed"
    fam = FamilySpec.numeric(a=1, b=1, c={"prefix": ["1/20"], "tail": "1/10"},
                             lam={"prefix": [1, 2, 3], "tail": "unbounded"})
    rep = convergence_margin(fam)
    assert rep["tau"] == "converges" and rep["mu"] == "not guaranteed"
    with pytest.raises(ModeMismatch):
        convergence_margin(SYMBOLIC)


def test_const_table_rows():
    rows = const_table(12, POINT)
    assert [r["n"] for r in rows] == list(range(13))
    assert max(r["rel_dev"] for r in rows) < 1e-8


def test_symbolic_moments_match_closed_form_coefficients():
    """Collapsed symbolic mu_n, graded by degree, against the closed-sum coefficients."""
    a, b, c, lam = (Fraction(3, 10), Fraction(1, 2), Fraction(1, 20), Fraction(7, 10))
    point = {}
    for i in range(0, 12):
        point[Variable("b", i)] = b
        if i:
            point[Variable("a", i)], point[Variable("c", i)], point[Variable("lambda", i)] = a, c, lam
    params = ConstParams(float(a), float(b), float(c), float(lam))
    cap = 6
    for n in range(6):
        body = mu_nrs(n, 0, 0, cap, SYMBOLIC, "dp").body
        exact = body.substitute(point).constant_term
        graded = Fraction(0)
        far = 0.0
        for i in range(n // 2 + 1):
            for j in range(n - 2 * i + 1):
                m = n - 2 * i - j
                for k in range(cap + 60):
                    term = closed_form_coefficient(n, i, j, k) * b ** m * lam ** i * a ** j * c ** k
                    if m + i + j + k <= cap:
                        graded += term
                    else:
                        far += float(term)
        assert exact == graded, n
        total, bound = mu_const_closed_with_bound(n, params)
        # everything the cap dropped is accounted for by the higher-degree terms
        assert total - float(exact) == pytest.approx(far, rel=1e-9, abs=1e-14)
        assert bound <= 1e-12 * total


draws = st.tuples(
    st.floats(-1, 1), st.floats(-1, 1), st.floats(-0.24, 0.24), st.floats(-1, 1),
)


@given(draws, st.integers(0, 8), st.data())
def test_tail_bound_covers_the_next_terms(params, n, data):
    a, b, c, lam = params
    p = ConstParams(a, b, c, lam, tol=1e-6)
    i = data.draw(st.integers(0, n // 2))
    j = data.draw(st.integers(0, n - 2 * i))
    s, tail, k, more = k_series(n, i, j, p, extra=50)
    # the bound covers the whole tail, so in particular its first 50 terms
    assert more <= tail * (1 + 1e-9) + 1e-300


@given(st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-0.2, 0.2), st.floats(-1, 1)))
def test_closed_matches_gf_on_random_points(params):
    a, b, c, lam = params
    p = ConstParams(a, b, c, lam, tol=1e-15)
    gf = mu_gf_coeffs(8, p)
    for n in range(9):
        total, bound = mu_const_closed_with_bound(n, p)
        # mixed signs cancel; the sum of absolute terms sets the rounding scale
        scale = mu_const_closed(n, p.abs())
        assert abs(total - gf[n]) <= bound + 1e-12 * scale + 1e-300
