"""Weighted lattice paths with steps U, H, D, V, B.

Steps are U=(1,1), H=(1,0), D=(1,-1), V=(0,-1) and B=(-1,-1); paths stay in
the half plane y >= 0. H at height i weighs b_i; D, V and B leaving height i
weigh lambda_i, a_i and c_i; U weighs 1. A path's grading degree is its number
of non-U steps, which the truncation cap bounds.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import FAMILIES, Poly, TruncatedSeries
from .errors import UnsupportedNumericClass
from .families import SYMBOLIC, FamilySpec

STEPS = {"U": (1, 1), "H": (1, 0), "D": (1, -1), "V": (0, -1), "B": (-1, -1)}
STEP_FAMILY = {"H": "b", "D": "lambda", "V": "a", "B": "c"}
ORDER = "UHDVB"


class PathClass(enum.Enum):
    R2 = "R2"
    RestrictedR2 = "RestrictedR2"
    Motzkin = "Motzkin"
    Schroeder = "Schroeder"
    MotzkinSchroeder = "MotzkinSchroeder"

    @property
    def steps(self) -> str:
        return {
            "R2": "UHDVB",
            "RestrictedR2": "UHDVB",
            "Motzkin": "UHD",
            "Schroeder": "UHV",
            "MotzkinSchroeder": "UHDV",
        }[self.value]

    @property
    def restricted(self) -> bool:
        return self is PathClass.RestrictedR2

    @property
    def finite(self) -> bool:
        return "B" not in self.steps

    @classmethod
    def parse(cls, name: str) -> "PathClass":
        for c in cls:
            if c.value.lower() == name.lower():
                return c
        raise ValueError(f"unknown path class {name!r}")


@dataclass(frozen=True)
class LatticePath:
    start: tuple[int, int]
    steps: str

    def __post_init__(self):
        bad = set(self.steps) - set(STEPS)
        if bad:
            raise ValueError(f"unknown steps {sorted(bad)}")
        object.__setattr__(self, "start", (int(self.start[0]), int(self.start[1])))

    def points(self):
        x, y = self.start
        yield x, y
        for st in self.steps:
            dx, dy = STEPS[st]
            x += dx
            y += dy
            yield x, y

    @property
    def end(self) -> tuple[int, int]:
        x, y = self.start
        for st in self.steps:
            dx, dy = STEPS[st]
            x += dx
            y += dy
        return x, y

    @property
    def degree(self) -> int:
        return sum(1 for st in self.steps if st != "U")

    def __str__(self):
        return f"({self.start[0]},{self.start[1]}):{self.steps}"

    @classmethod
    def parse(cls, text: str) -> "LatticePath":
        m = re.fullmatch(r"\s*\((-?\d+),(\d+)\):([UHDVB]*)\s*", text)
        if not m:
            raise ValueError(f"cannot parse path {text!r}")
        return cls((int(m.group(1)), int(m.group(2))), m.group(3))


def validate_path(p: LatticePath, cls: PathClass, n: int, r: int, s: int) -> bool:
    if p.start != (0, r) or p.end != (n, s):
        return False
    if set(p.steps) - set(cls.steps):
        return False
    pts = list(p.points())
    if any(y < 0 for _, y in pts):
        return False
    if cls.restricted and any(x >= n for x, _ in pts[:-1]):
        return False
    return True


def step_weights(p: LatticePath, fam: FamilySpec = SYMBOLIC):
    """Per-step weights as Polys, in step order."""
    out = []
    x, y = p.start
    for st in p.steps:
        if st == "U":
            out.append(Poly.one())
        else:
            out.append(fam.coef(STEP_FAMILY[st], y))
        dx, dy = STEPS[st]
        x += dx
        y += dy
    return out


def path_weight(p: LatticePath, fam: FamilySpec = SYMBOLIC):
    """Product of step weights: a Poly for symbolic families, a Fraction otherwise."""
    w = Poly.one()
    for f in step_weights(p, fam):
        w = w * f
    if fam.mode == "numeric":
        return Fraction(w.constant_term)
    return w


def effective_cap(cls: PathClass, n: int, r: int, s: int, cap: int | None) -> int:
    """A finite degree bound that loses no path of the class."""
    if cap is not None:
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        if cls.finite:
            return min(cap, max(0, n + r - s))
        return cap
    if not cls.finite:
        raise ValueError(f"class {cls.value} is infinite; a cap is required")
    return max(0, n + r - s)


def _feasible(x, y, n, s, budget):
    # remaining non-U steps can still close the gap to (n, s)
    delta = (n - x) - (s - y)
    return 0 <= delta <= 2 * budget and y - s <= budget


def enumerate_paths(cls: PathClass, n: int, r: int, s: int, cap: int | None) -> list:
    """All paths of the class from (0,r) to (n,s) with degree <= cap, in lex order."""
    if n < 0 or r < 0 or s < 0:
        return []
    cap = effective_cap(cls, n, r, s, cap)
    allowed = [st for st in ORDER if st in cls.steps]
    restricted = cls.restricted
    out = []
    word = []

    def dfs(x, y, budget):
        if x == n and y == s:
            out.append("".join(word))
            if restricted:
                return
        for st in allowed:
            dx, dy = STEPS[st]
            nx, ny = x + dx, y + dy
            if ny < 0:
                continue
            nb = budget if st == "U" else budget - 1
            if nb < 0:
                continue
            if restricted and nx >= n and (nx, ny) != (n, s):
                continue
            if not _feasible(nx, ny, n, s, nb):
                continue
            word.append(st)
            dfs(nx, ny, nb)
            word.pop()

    if restricted and n == 0:
        return [LatticePath((0, r), "")] if r == s else []
    if _feasible(0, r, n, s, cap):
        dfs(0, r, cap)
    return [LatticePath((0, r), w) for w in out]


def _check_numeric(cls: PathClass, fam: FamilySpec):
    if fam.mode == "numeric" and not cls.finite and not fam.is_zero("c"):
        raise UnsupportedNumericClass(
            f"class {cls.value} has infinitely many paths; numeric sums need constmoments"
        )


def path_sum(cls: PathClass, n: int, r: int, s: int, cap: int | None,
             fam: FamilySpec = SYMBOLIC, method: str = "dp") -> TruncatedSeries:
    """Weighted sum over the class, by enumeration ("paths") or dynamic programming ("dp")."""
    _check_numeric(cls, fam)
    out_cap = cap
    if not cls.finite and fam.is_zero("c"):
        # B steps weigh zero, and B-free paths have degree at most n + r - s
        bound = max(0, n + r - s)
        cap = bound if cap is None else min(cap, bound)
    if method == "paths":
        paths = enumerate_paths(cls, n, r, s, cap)
        if fam.mode == "symbolic":
            total = _symbolic_total(paths, fam)
        else:
            total = Poly.zero()
            for p in paths:
                w = Poly.one()
                for f in step_weights(p, fam):
                    w = w * f
                total = total + w
    elif method == "dp":
        total = _dp_sum(cls, n, r, s, cap, fam)
    else:
        raise ValueError(f"unknown path_sum method {method!r}")
    return TruncatedSeries(total, out_cap)


def _symbolic_total(paths, fam) -> Poly:
    # each path weight is a single monomial, so count keys directly
    zero = {st for st, f in STEP_FAMILY.items() if fam.is_zero(f)}
    rank = {st: FAMILIES.index(f) << 24 for st, f in STEP_FAMILY.items()}
    counts = {}
    for p in paths:
        y = p.start[1]
        key = []
        for st in p.steps:
            if st != "U":
                if st in zero:
                    key = None
                    break
                key.append(rank[st] | y)
            y += STEPS[st][1]
        if key is not None:
            k = tuple(sorted(key))
            counts[k] = counts.get(k, 0) + 1
    return Poly(counts, _trusted=True)


def _dp_sum(cls, n, r, s, cap, fam) -> Poly:
    if n < 0 or r < 0 or s < 0:
        return Poly.zero()
    ecap = effective_cap(cls, n, r, s, cap)
    if cls.restricted and n == 0:
        return Poly.one() if r == s else Poly.zero()
    if not _feasible(0, r, n, s, ecap):
        return Poly.zero()
    allowed = [st for st in cls.steps if st != "U"]
    restricted = cls.restricted
    coef_cache = {}

    def coef(st, y):
        key = (st, y)
        if key not in coef_cache:
            coef_cache[key] = fam.coef(STEP_FAMILY[st], y)
        return coef_cache[key]

    total = Poly.zero()
    layer = {(0, r): Poly.one()}
    for d in range(ecap + 1):
        budget = ecap - d
        nxt = {}
        # U steps stay in the layer; they raise y, so sweep by height
        by_y = {}
        for (x, y), w in layer.items():
            by_y.setdefault(y, {})[(x, y)] = w
        if not by_y:
            break
        y = min(by_y)
        top = max(by_y)
        while y <= top:
            bucket = by_y.pop(y, None)
            if bucket:
                for (x, yy), w in sorted(bucket.items()):
                    if x == n and yy == s:
                        total = total + w
                        if restricted:
                            continue
                    nx, ny = x + 1, yy + 1
                    if not (restricted and nx >= n and (nx, ny) != (n, s)) and \
                            _feasible(nx, ny, n, s, budget):
                        tgt = by_y.setdefault(ny, {})
                        tgt[(nx, ny)] = tgt[(nx, ny)] + w if (nx, ny) in tgt else w
                        top = max(top, ny)
                    if budget == 0:
                        continue
                    for st in allowed:
                        dx, dy = STEPS[st]
                        nx, ny = x + dx, yy + dy
                        if ny < 0:
                            continue
                        if restricted and nx >= n and (nx, ny) != (n, s):
                            continue
                        if not _feasible(nx, ny, n, s, budget - 1):
                            continue
                        c = coef(st, yy)
                        if not c:
                            continue
                        nw = w * c
                        if nw:
                            nxt[(nx, ny)] = nxt[(nx, ny)] + nw if (nx, ny) in nxt else nw
            y += 1
        layer = nxt
    return total


def count_paths(cls: PathClass, n: int, r: int, s: int, cap: int | None) -> int:
    return len(enumerate_paths(cls, n, r, s, cap))
