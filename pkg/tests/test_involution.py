import pytest
from hypothesis import given, strategies as st

from rii.algebra import PolyInX, parse_poly
from rii.errors import InvalidPair
from rii.families import compute_P
from rii.involution import (
    DottedTiling,
    P_via_tilings,
    PairState,
    enumerate_pairs,
    enumerate_tilings,
    in_X,
    is_characterized_fixed,
    pair_degree,
    pair_weight,
    phi,
    tiling_weight,
    verify_involution,
)
from rii.paths import LatticePath

P = parse_poly
X = PolyInX.x()


def pair(path, tiling):
    return PairState(LatticePath.parse(path), DottedTiling.parse(tiling))


def test_small_tiling_sets():
    assert enumerate_tilings(0) == [DottedTiling(())]
    assert sorted(map(str, enumerate_tilings(1))) == ["m0", "m1"]
    assert len(enumerate_tilings(2)) == 7
    assert len(enumerate_tilings(-1)) == 0


def test_tile_weights():
    tiled = DottedTiling(("M1", "D1", "M0", "D2", "D0"))
    assert tiled.size == 8
    assert tiling_weight(tiled) == X.shift(3).mul(P("a2*b3*c5*l7"))
    assert tiling_weight(DottedTiling(("M1",) * 4)) == X.shift(3)
    assert tiling_weight(DottedTiling(("M0",))) == PolyInX.constant(P("-b0"))


def test_tiling_sums():
    assert P_via_tilings(1) == X - PolyInX.constant(P("b0"))
    assert P_via_tilings(2) == compute_P(2)
    assert P_via_tilings(3).coeff(3) == P("1 - c1 - c2")


def test_case_1_1_from_horizontal_step():
    st = pair("(0,0):H", "")
    img, label = phi(st)
    assert label == "1-1"
    assert img == pair("(0,0):U", "m0")
    assert pair_weight(st) == PolyInX.constant(P("b0"))
    assert pair_weight(img) == -pair_weight(st)
    assert phi(img) == (st, "2-1")


def test_fixed_point():
    st = pair("(0,0):U", "m1")
    assert phi(st) == (st, "fixed")
    assert pair_weight(st) == X
    assert is_characterized_fixed(st, 1)


def test_case_1_1_on_a_longer_pair():
    st = pair("(0,2):UUVHUU", "d1.m1.m1.m1")
    assert in_X(st) and st.path.end == (5, 5)
    img, label = phi(st)
    assert label == "1-1"
    assert img == pair("(0,2):UUVUUU", "d1.m1.m0.m1.m1")
    assert img.path.end == (5, 6)
    back, label2 = phi(img)
    assert back == st and label2 == "2-1"


def test_pairs_outside_the_set():
    with pytest.raises(InvalidPair):
        phi(pair("(0,0):U", "m1.m1"))
    with pytest.raises(InvalidPair):
        phi(pair("(0,0):UBU", "m1"))


@pytest.mark.parametrize("n,r,want", [
    (1, 0, X),
    (2, 1, X.shift(2) - X.shift(1).mul(P("b0"))),
])
def test_verify_examples(n, r, want):
    rep = verify_involution(n, r, 3)
    assert rep["passed"] and rep["failures"] == 0
    assert rep["signed_sum_ok"]
    assert rep["signed_sum"] == str(want)


def test_verify_three_zero():
    rep = verify_involution(3, 0, 3)
    assert rep["passed"]
    assert set(rep["cases"]) <= {"fixed", "1-1", "1-2", "1-3", "1-4", "2-1", "2-2", "2-3", "2-4"}
    for m in "1234":
        assert rep["cases"].get(f"1-{m}", 0) == rep["cases"].get(f"2-{m}", 0)


slices = st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 3))


@given(slices, st.data())
def test_phi_is_an_involution(slc, data):
    n, r, cap = slc
    states = enumerate_pairs(n, r, cap)
    st_ = data.draw(st.sampled_from(states))
    img, label = phi(st_)
    assert phi(img)[0] == st_
    assert pair_degree(img) == pair_degree(st_)
    if label == "fixed":
        assert pair_weight(img) == pair_weight(st_)
    else:
        assert pair_weight(img) == -pair_weight(st_)
