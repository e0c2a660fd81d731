"""Dotted tilings and the sign-reversing involution on (path, tiling) pairs.

A dotted tiling of a 1 x k board uses monominoes M0, M1 and dominoes D0, D1,
D2 (the digit counts dots). With boxes labelled 1..k and a domino labelled by
its right box i, the tile weights are

    M1 -> x,  M0 at i -> -b_{i-1},  D0 -> -lambda_{i-1},
    D1 -> -a_{i-1} x,  D2 -> -c_{i-1} x^2,

and P_k(x) is the sum of the weights of all tilings of size k.

The involution acts on pairs (p, T) with p a restricted path from (0, r) to
(n, k) and T a tiling of size k. Its fixed points are the all-U path paired
with tilings ending in n tiles M1, so the signed weight sum is x^n P_r(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import Poly, PolyInX
from .errors import InvalidPair
from .families import SYMBOLIC, FamilySpec, compute_P
from .paths import LatticePath, PathClass, enumerate_paths, path_weight, validate_path

TILES = ("M0", "M1", "D0", "D1", "D2")
LENGTH = {"M0": 1, "M1": 1, "D0": 2, "D1": 2, "D2": 2}


@dataclass(frozen=True)
class DottedTiling:
    tiles: tuple = ()

    def __post_init__(self):
        tiles = tuple(self.tiles)
        bad = [t for t in tiles if t not in LENGTH]
        if bad:
            raise ValueError(f"unknown tiles {bad}")
        object.__setattr__(self, "tiles", tiles)

    @property
    def size(self) -> int:
        return sum(LENGTH[t] for t in self.tiles)

    @property
    def degree(self) -> int:
        return sum(1 for t in self.tiles if t != "M1")

    def __str__(self):
        return ".".join(t.lower() for t in self.tiles)

    @classmethod
    def parse(cls, text: str) -> "DottedTiling":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(t.upper() for t in text.split(".")))


@dataclass(frozen=True)
class PairState:
    path: LatticePath
    tiling: DottedTiling

    def __str__(self):
        return f"{self.path} | {self.tiling}"

    def to_json(self) -> dict:
        return {"path": str(self.path), "tiling": str(self.tiling)}


def enumerate_tilings(k: int) -> list:
    """All dotted tilings of size k, in a fixed order."""
    return [DottedTiling(t) for t in _tilings(k)]


@lru_cache(maxsize=None)
def _tilings(k: int) -> tuple:
    if k < 0:
        return ()
    if k == 0:
        return ((),)
    out = []
    for t in ("M0", "M1"):
        out.extend(rest + (t,) for rest in _tilings(k - 1))
    if k >= 2:
        for t in ("D0", "D1", "D2"):
            out.extend(rest + (t,) for rest in _tilings(k - 2))
    return tuple(sorted(out))


def tiling_weight(T: DottedTiling, fam: FamilySpec = SYMBOLIC) -> PolyInX:
    w = PolyInX.one()
    pos = 0
    for t in T.tiles:
        pos += LENGTH[t]
        if t == "M1":
            w = w.shift(1)
            continue
        if t == "M0":
            f, xp = fam.coef("b", pos - 1), 0
        elif t == "D0":
            f, xp = fam.coef("lambda", pos - 1), 0
        elif t == "D1":
            f, xp = fam.coef("a", pos - 1), 1
        else:
            f, xp = fam.coef("c", pos - 1), 2
        w = w.mul(-f).shift(xp)
    return w


def P_via_tilings(n: int, fam: FamilySpec = SYMBOLIC) -> PolyInX:
    total = PolyInX.zero()
    for T in enumerate_tilings(n):
        total = total + tiling_weight(T, fam)
    return total


def pair_weight(state: PairState, fam: FamilySpec = SYMBOLIC) -> PolyInX:
    w = path_weight(state.path, fam)
    if not isinstance(w, Poly):
        w = Poly.const(w)
    return tiling_weight(state.tiling, fam).mul(w)


def pair_degree(state: PairState) -> int:
    return state.path.degree + state.tiling.degree


def _trailing(seq, item) -> int:
    i = 0
    for x in reversed(seq):
        if x != item:
            break
        i += 1
    return i


def in_X(state: PairState) -> bool:
    p, T = state.path, state.tiling
    if p.start[0] != 0:
        return False
    n, k = p.end
    return T.size == k and validate_path(p, PathClass.RestrictedR2, n, p.start[1], k)


def phi(state: PairState) -> tuple[PairState, str]:
    """Image of a pair under the involution, with the name of the case used."""
    if not in_X(state):
        raise InvalidPair(f"{state} is not a restricted path with a tiling of its end height")
    steps = state.path.steps
    tiles = state.tiling.tiles
    start = state.path.start
    i = _trailing(steps, "U")
    j = _trailing(tiles, "M1")
    L = len(steps)
    nt = len(tiles)
    if i <= j:
        if i == L:
            return state, "fixed"
        pos = L - i - 1  # index of p^{i+1}
        step = steps[pos]
        # where a tile goes so that exactly i tiles follow it
        ins = nt - i
        if step == "H":
            new_steps = steps[:pos] + "U" + steps[pos + 1:]
            new_tiles = tiles[:ins] + ("M0",) + tiles[ins:]
            label = "1-1"
        elif step == "D":
            new_steps = steps[:pos] + "U" + steps[pos + 1:]
            new_tiles = tiles[:ins] + ("D0",) + tiles[ins:]
            label = "1-2"
        elif step == "V":
            if i < 1:
                raise InvalidPair(f"{state}: V step with no up steps after it")
            new_steps = steps[:pos] + steps[pos + 1:]
            t = nt - i  # index of T^i
            new_tiles = tiles[:t] + ("D1",) + tiles[t + 1:]
            label = "1-3"
        else:  # B
            if i < 2:
                raise InvalidPair(f"{state}: B step followed by fewer than two up steps")
            new_steps = steps[:pos] + steps[pos + 2:]
            t = nt - i
            new_tiles = tiles[:t] + ("D2",) + tiles[t + 2:]
            label = "1-4"
    else:
        pos = L - j - 1  # index of p^{j+1}, an up step
        t = nt - j - 1  # index of T^{j+1}
        tile = tiles[t]
        if tile == "M0":
            new_steps = steps[:pos] + "H" + steps[pos + 1:]
            new_tiles = tiles[:t] + tiles[t + 1:]
            label = "2-1"
        elif tile == "D0":
            new_steps = steps[:pos] + "D" + steps[pos + 1:]
            new_tiles = tiles[:t] + tiles[t + 1:]
            label = "2-2"
        elif tile == "D1":
            new_steps = steps[:pos] + "V" + steps[pos:]
            new_tiles = tiles[:t] + ("M1",) + tiles[t + 1:]
            label = "2-3"
        else:  # D2
            new_steps = steps[:pos] + "BU" + steps[pos:]
            new_tiles = tiles[:t] + ("M1", "M1") + tiles[t + 1:]
            label = "2-4"
    image = PairState(LatticePath(start, new_steps), DottedTiling(new_tiles))
    return image, label


def enumerate_pairs(n: int, r: int, cap: int) -> list:
    """All pairs with path from (0,r) to x = n and total degree <= cap."""
    out = []
    for k in range(n + r + 1):
        tilings = enumerate_tilings(k)
        for p in enumerate_paths(PathClass.RestrictedR2, n, r, k, cap):
            room = cap - p.degree
            for T in tilings:
                if T.degree <= room:
                    out.append(PairState(p, T))
    return out


def is_characterized_fixed(state: PairState, n: int) -> bool:
    p, T = state.path, state.tiling
    return (
        set(p.steps) <= {"U"}
        and len(T.tiles) >= n
        and all(t == "M1" for t in T.tiles[len(T.tiles) - n:])
    )


def verify_involution(n: int, r: int, cap: int, fam: FamilySpec = SYMBOLIC,
                      max_examples: int = 10) -> dict:
    """Exhaustively check the involution on the degree-bounded slice."""
    states = enumerate_pairs(n, r, cap)
    problems = []
    cases = {}
    signed = PolyInX.zero()
    fixed = 0

    def fail(kind, state, extra=None):
        if len(problems) < max_examples:
            item = {"check": kind, "pair": state.to_json()}
            if extra:
                item.update(extra)
            problems.append(item)

    failures = 0
    for st in states:
        w = pair_weight(st, fam)
        signed = signed + w
        try:
            img, label = phi(st)
        except InvalidPair as e:
            failures += 1
            fail("precondition", st, {"error": str(e)})
            continue
        cases[label] = cases.get(label, 0) + 1
        if label == "fixed":
            fixed += 1
            if not is_characterized_fixed(st, n):
                failures += 1
                fail("fixed-point characterization", st)
            continue
        if is_characterized_fixed(st, n):
            failures += 1
            fail("fixed-point characterization", st, {"case": label})
        if not in_X(img) or img.path.end[0] != n or img.path.start != st.path.start:
            failures += 1
            fail("image outside the set", st, {"image": img.to_json(), "case": label})
            continue
        if pair_degree(img) != pair_degree(st):
            failures += 1
            fail("degree preservation", st, {"image": img.to_json(), "case": label})
        if pair_weight(img, fam) != -w:
            failures += 1
            fail("sign reversal", st, {"image": img.to_json(), "case": label})
        try:
            back, label2 = phi(img)
        except InvalidPair as e:
            failures += 1
            fail("involution", st, {"image": img.to_json(), "error": str(e)})
            continue
        if back != st:
            failures += 1
            fail("involution", st, {"image": img.to_json(), "back": back.to_json()})
        kind, m = label.split("-")
        if label2 != f"{'2' if kind == '1' else '1'}-{m}":
            failures += 1
            fail("case pairing", st, {"case": label, "inverse case": label2})
    target = compute_P(r, fam).shift(n).truncate(cap)
    sum_ok = signed.truncate(cap) == target
    if not sum_ok:
        failures += 1
        problems.append({"check": "signed sum", "got": str(signed), "expected": str(target)})
    return {
        "n": n,
        "r": r,
        "cap": cap,
        "pairs": len(states),
        "fixed_points": fixed,
        "cases": dict(sorted(cases.items())),
        "signed_sum": str(signed.truncate(cap)),
        "signed_sum_ok": sum_ok,
        "failures": failures,
        "counterexamples": problems,
        "passed": failures == 0,
    }
