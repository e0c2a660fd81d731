from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rii.algebra import Poly, parse_poly
from rii.errors import UnsupportedNumericClass
from rii.families import SYMBOLIC, FamilySpec
from rii.paths import (
    LatticePath,
    PathClass,
    count_paths,
    enumerate_paths,
    path_sum,
    path_weight,
    validate_path,
)

P = parse_poly
SAMPLE = LatticePath((0, 0), "UUBUBUVUUVBDHU")


def test_sample_path():
    assert validate_path(SAMPLE, PathClass.R2, 6, 0, 1)
    assert SAMPLE.end == (6, 1)
    assert path_weight(SAMPLE) == P("a2*a3*b0*c2^3*l1")
    assert SAMPLE.degree == 7
    assert LatticePath.parse(str(SAMPLE)) == SAMPLE


def test_restricted_condition():
    assert validate_path(LatticePath((0, 0), "U"), PathClass.RestrictedR2, 1, 0, 1)
    assert not validate_path(LatticePath((0, 0), "UBU"), PathClass.RestrictedR2, 1, 0, 1)
    assert validate_path(LatticePath((0, 0), "UBU"), PathClass.R2, 1, 0, 1)


def test_floor_and_step_set():
    assert not validate_path(LatticePath((0, 0), "HD"), PathClass.R2, 2, 0, 0)
    assert not validate_path(LatticePath((0, 1), "V"), PathClass.Motzkin, 0, 1, 0)
    assert validate_path(LatticePath((0, 1), "V"), PathClass.Schroeder, 0, 1, 0)


def test_simple_weights():
    assert path_weight(LatticePath((0, 0), "UUUU")) == Poly.one()
    assert path_weight(LatticePath((0, 0), "UB")) == P("c1")
    fam = FamilySpec.constant(Fraction(1, 2), 3, Fraction(1, 5), 7)
    assert path_weight(LatticePath((0, 0), "UBH"), fam) == Fraction(3, 5)


def test_loops_at_origin():
    words = {p.steps for p in enumerate_paths(PathClass.R2, 0, 0, 0, 2)}
    assert words == {"", "UB", "UBUB", "UUBB"}
    for m in range(1, 4):
        assert enumerate_paths(PathClass.R2, 0, 0, m, 5) == []


def test_motzkin_count():
    assert count_paths(PathClass.Motzkin, 4, 0, 0, 4) == 9
    assert [count_paths(PathClass.Motzkin, n, 0, 0, None) for n in range(8)] == [1, 1, 2, 4, 9, 21, 51, 127]
    # large Schroeder numbers
    assert [count_paths(PathClass.Schroeder, n, 0, 0, None) for n in range(6)] == [1, 2, 6, 22, 90, 394]


def test_path_sum_examples():
    assert path_sum(PathClass.R2, 0, 0, 0, 2).body == P("1 + c1 + c1^2 + c1*c2")
    assert path_sum(PathClass.R2, 1, 0, 0, 1).body == P("b0 + a1")
    assert path_sum(PathClass.RestrictedR2, 1, 0, 0, 5).body == P("b0")


def test_numeric_infinite_class_is_rejected():
    fam = FamilySpec.constant(1, 1, Fraction(1, 10), 1)
    with pytest.raises(UnsupportedNumericClass):
        path_sum(PathClass.R2, 2, 0, 0, 3, fam)
    # finite classes are fine
    assert path_sum(PathClass.Motzkin, 2, 0, 0, None, fam).body == Poly.const(2)


def test_cap_none_needs_finite_class():
    with pytest.raises(ValueError):
        enumerate_paths(PathClass.R2, 1, 0, 0, None)


def test_path_order_is_lexicographic():
    words = [p.steps for p in enumerate_paths(PathClass.R2, 2, 1, 1, 3)]
    key = {s: i for i, s in enumerate("UHDVB")}
    assert words == sorted(words, key=lambda w: [key[c] for c in w])


classes = st.sampled_from(list(PathClass))
small = st.integers(0, 3)


@given(classes, small, small, small, st.integers(0, 4))
def test_enumeration_and_dp_agree(cls, n, r, s, cap):
    a = path_sum(cls, n, r, s, cap, method="paths").body
    b = path_sum(cls, n, r, s, cap, method="dp").body
    assert a == b
    assert all(c == int(c) and c > 0 for c in a.terms.values())
    assert a.degree <= cap


@given(classes, small, small, small, st.integers(0, 4))
def test_enumerated_paths_are_valid(cls, n, r, s, cap):
    paths = enumerate_paths(cls, n, r, s, cap)
    assert len(set(paths)) == len(paths)
    for p in paths:
        assert validate_path(p, cls, n, r, s)
        assert p.degree <= cap
        assert p.start == (0, r) and p.end == (n, s)


@given(small, small, small, st.integers(0, 3))
def test_restricted_is_a_subset(n, r, s, cap):
    restricted = set(enumerate_paths(PathClass.RestrictedR2, n, r, s, cap))
    full = set(enumerate_paths(PathClass.R2, n, r, s, cap))
    assert restricted <= full
    for p in full - restricted:
        assert any(x >= n for x, _ in list(p.points())[:-1])


@given(small, small, st.integers(0, 3), st.sampled_from(["c", "a", "lambda", "b"]))
def test_zero_family_drops_its_steps(n, r, s, zero):
    zeros = {"c", zero}
    fam = FamilySpec.symbolic(zeros)
    full = path_sum(PathClass.R2, n, r, s, 4).body.zero_families(*zeros)
    assert path_sum(PathClass.R2, n, r, s, 4, fam).body == full
