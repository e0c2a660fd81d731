"""Coefficient families and the three-term recurrence engine.

A family supplies the four sequences a_n, b_n, c_n, lambda_n of

    P_{n+1}(x) = (x - b_n) P_n(x) - (c_n x^2 + a_n x + lambda_n) P_{n-1}(x),

either as indexed symbols (with whole families optionally set to zero) or as
exact rational numbers given by a finite prefix plus a constant tail.
"""

from __future__ import annotations

import cmath
import json
import threading
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .algebra import FAMILIES, Poly, PolyInX
from .errors import InadmissibleFamily, ModeMismatch

START = {"a": 1, "b": 0, "c": 1, "lambda": 1}
UNBOUNDED = "unbounded"


def _to_fraction(v) -> Fraction:
    if isinstance(v, bool):
        raise InadmissibleFamily("booleans are not coefficient values")
    if isinstance(v, float):
        return Fraction(repr(v))
    try:
        return Fraction(str(v).strip()) if isinstance(v, str) else Fraction(v)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise InadmissibleFamily(f"bad coefficient value {v!r}") from e


class NumericSequence:
    """Finite prefix followed by a constant tail.

    The prefix starts at the first index of the family (0 for b, 1 otherwise).
    A tail of ``"unbounded"`` marks a sequence known to grow without bound;
    past the prefix it continues as ``m * last`` so it can still be evaluated.
    """

    __slots__ = ("start", "prefix", "tail")

    def __init__(self, start: int, prefix: Iterable = (), tail=0):
        self.start = start
        self.prefix = tuple(_to_fraction(v) for v in prefix)
        if tail == UNBOUNDED:
            if not self.prefix:
                raise InadmissibleFamily("an unbounded tail needs a nonempty prefix")
            self.tail = UNBOUNDED
        else:
            self.tail = _to_fraction(tail)

    def __getitem__(self, m: int) -> Fraction:
        k = m - self.start
        if k < 0:
            raise IndexError(m)
        if k < len(self.prefix):
            return self.prefix[k]
        if self.tail == UNBOUNDED:
            return m * (self.prefix[-1] if self.prefix[-1] else 1)
        return self.tail

    @property
    def bounded(self) -> bool:
        return self.tail != UNBOUNDED

    def sup_abs(self) -> float:
        if not self.bounded:
            return float("inf")
        return float(max([abs(v) for v in self.prefix] + [abs(self.tail)]))

    def identically_zero(self) -> bool:
        return self.bounded and self.tail == 0 and not any(self.prefix)

    def is_constant(self) -> bool:
        return self.bounded and all(v == self.tail for v in self.prefix)

    def to_json(self) -> dict:
        tail = self.tail if self.tail == UNBOUNDED else _frac_json(self.tail)
        return {"prefix": [_frac_json(v) for v in self.prefix], "tail": tail}

    def __eq__(self, other):
        return (
            isinstance(other, NumericSequence)
            and (self.start, self.prefix, self.tail) == (other.start, other.prefix, other.tail)
        )

    def __hash__(self):
        return hash((self.start, self.prefix, self.tail))


def _frac_json(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class PolySeq:
    """Append-only cache of P_0..P_n and d_0..d_n for one family."""

    def __init__(self, fam: "FamilySpec"):
        self._fam = fam
        self._lock = threading.Lock()
        self.P = [PolyInX.one()]
        self.d = [PolyInX.one()]
        self.lead = [Poly.one()]

    def get_P(self, n: int) -> PolyInX:
        if n >= len(self.P):
            with self._lock:
                while len(self.P) <= n:
                    k = len(self.P) - 1
                    fam = self._fam
                    nxt = self.P[k].shift(1) - self.P[k].mul(fam.coef("b", k), None)
                    if k >= 1:
                        nxt = nxt - fam.quadratic(k).mul(self.P[k - 1], None)
                    self.P.append(nxt)
        return self.P[n]

    def get_d(self, n: int) -> PolyInX:
        if n >= len(self.d):
            with self._lock:
                while len(self.d) <= n:
                    k = len(self.d)
                    self.d.append(self.d[-1].mul(self._fam.quadratic(k), None))
        return self.d[n]

    def get_lead(self, n: int) -> Poly:
        if n >= len(self.lead):
            with self._lock:
                while len(self.lead) <= n:
                    k = len(self.lead) - 1
                    prev = self.lead[k - 1] if k >= 1 else Poly.zero()
                    c = self._fam.coef("c", k) if k >= 1 else Poly.zero()
                    self.lead.append(self.lead[k] - c * prev)
        return self.lead[n]


class FamilySpec:
    """A coefficient family, symbolic or numeric.

    ``zero_pattern[f]`` is True when family ``f`` is identically zero.
    """

    def __init__(self, mode: str = "symbolic", sequences: Mapping | None = None,
                 zero_pattern: Mapping[str, bool] | None = None):
        if mode not in ("symbolic", "numeric"):
            raise InadmissibleFamily(f"unknown mode {mode!r}")
        self.mode = mode
        given = {f: bool((zero_pattern or {}).get(f, False)) for f in FAMILIES}
        extra = set(zero_pattern or {}) - set(FAMILIES)
        if extra:
            raise InadmissibleFamily(f"unknown families in zero_pattern: {sorted(extra)}")
        if mode == "numeric":
            seqs = {}
            for f in FAMILIES:
                s = (sequences or {}).get(f, NumericSequence(START[f]))
                if not isinstance(s, NumericSequence):
                    if isinstance(s, Mapping):
                        s = NumericSequence(START[f], s.get("prefix", ()), s.get("tail", 0))
                    else:
                        s = NumericSequence(START[f], (), s)
                seqs[f] = s
            self.sequences = seqs
            for f in FAMILIES:
                zero = seqs[f].identically_zero()
                if given[f] and not zero:
                    raise InadmissibleFamily(f"family {f} is flagged zero but has nonzero values")
                given[f] = zero
        else:
            if sequences:
                raise InadmissibleFamily("symbolic families take no numeric sequences")
            self.sequences = None
        self.zero_pattern = given
        self._check_admissible()
        self._polys = PolySeq(self)

    # constructors
    @classmethod
    def symbolic(cls, zero: Iterable[str] = ()) -> "FamilySpec":
        zero = set(zero)
        return cls("symbolic", zero_pattern={f: f in zero for f in FAMILIES})

    @classmethod
    def constant(cls, a=0, b=0, c=0, lam=0) -> "FamilySpec":
        vals = {"a": a, "b": b, "c": c, "lambda": lam}
        return cls("numeric", {f: NumericSequence(START[f], (), v) for f, v in vals.items()})

    @classmethod
    def numeric(cls, **seqs) -> "FamilySpec":
        """Numeric family from keyword sequences; use ``lam`` for lambda."""
        if "lam" in seqs:
            seqs["lambda"] = seqs.pop("lam")
        return cls("numeric", seqs)

    @classmethod
    def from_json(cls, data) -> "FamilySpec":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping):
            raise InadmissibleFamily("family description must be a JSON object")
        mode = data.get("mode", "symbolic")
        seqs = None
        if mode == "numeric":
            seqs = {}
            for f in FAMILIES:
                spec = data.get(f, {"prefix": [], "tail": 0})
                if not isinstance(spec, Mapping):
                    spec = {"prefix": [], "tail": spec}
                seqs[f] = NumericSequence(START[f], spec.get("prefix", []), spec.get("tail", 0))
        return cls(mode, seqs, data.get("zero_pattern"))

    @classmethod
    def load(cls, path) -> "FamilySpec":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as e:
                raise InadmissibleFamily(f"invalid JSON in {path}: {e}") from e
        return cls.from_json(data)

    def to_json(self) -> dict:
        out = {"mode": self.mode}
        if self.mode == "numeric":
            for f in FAMILIES:
                out[f] = self.sequences[f].to_json()
        out["zero_pattern"] = dict(self.zero_pattern)
        return out

    # queries
    @property
    def is_symbolic(self) -> bool:
        return self.mode == "symbolic"

    def is_zero(self, family: str) -> bool:
        return self.zero_pattern[family]

    def value(self, family: str, index: int) -> Fraction:
        if self.mode != "numeric":
            raise ModeMismatch("numeric values requested from a symbolic family")
        return self.sequences[family][index]

    def coef(self, family: str, index: int) -> Poly:
        """The coefficient as a Poly: a variable, a rational, or zero."""
        if index < START[family]:
            raise IndexError(f"{family}_{index} is not defined")
        if self.zero_pattern[family]:
            return Poly.zero()
        if self.mode == "symbolic":
            return Poly.var(family, index)
        return Poly.const(self.sequences[family][index])

    def quadratic(self, k: int) -> PolyInX:
        """c_k x^2 + a_k x + lambda_k."""
        return PolyInX({2: self.coef("c", k), 1: self.coef("a", k), 0: self.coef("lambda", k)})

    def constant_values(self) -> dict | None:
        """``{family: value}`` when every sequence is constant, else None."""
        if self.mode != "numeric" or not all(s.is_constant() for s in self.sequences.values()):
            return None
        return {f: self.sequences[f].tail for f in FAMILIES}

    def _check_admissible(self):
        zp = self.zero_pattern
        if zp["a"] and zp["c"] and zp["lambda"]:
            raise InadmissibleFamily("a, c and lambda cannot all vanish identically")
        if self.mode == "numeric":
            seqs = self.sequences
            top = max(len(seqs[f].prefix) + seqs[f].start for f in FAMILIES) + 1
            for m in range(1, top + 1):
                if not any(seqs[f][m] for f in ("a", "c", "lambda")):
                    raise InadmissibleFamily(f"a_{m}, c_{m} and lambda_{m} are all zero")

    def pattern_name(self) -> str:
        zp = self.zero_pattern
        if zp["c"] and zp["a"]:
            return "classical"
        if zp["c"] and zp["lambda"]:
            return "laurent"
        if zp["c"]:
            return "r1"
        return "r2"

    def restrict(self, zero: Iterable[str]) -> "FamilySpec":
        """The same family with additional families set identically to zero."""
        zero = set(zero)
        if self.mode == "symbolic":
            return FamilySpec.symbolic({f for f in FAMILIES if self.zero_pattern[f]} | zero)
        seqs = {
            f: NumericSequence(START[f], (), 0) if f in zero else self.sequences[f]
            for f in FAMILIES
        }
        return FamilySpec("numeric", seqs)

    def _key(self):
        if self.mode == "symbolic":
            return ("symbolic", tuple(sorted(self.zero_pattern.items())))
        return ("numeric", tuple(self.sequences[f] for f in FAMILIES))

    def __eq__(self, other):
        return isinstance(other, FamilySpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FamilySpec({json.dumps(self.to_json(), sort_keys=True)})"


SYMBOLIC = FamilySpec.symbolic()


def compute_P(n: int, fam: FamilySpec = SYMBOLIC) -> PolyInX:
    if n < 0:
        return PolyInX.zero()
    return fam._polys.get_P(n)


def compute_d(n: int, fam: FamilySpec = SYMBOLIC) -> PolyInX:
    """d_n(x), the product of the quadratic factors 1..n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return fam._polys.get_d(n)


def leading_coeff(n: int, fam: FamilySpec = SYMBOLIC) -> Poly:
    """Coefficient of x^n in P_n, from its own two-term recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return fam._polys.get_lead(n)


def classify(fam: FamilySpec) -> str:
    """Polynomial class named by the zero pattern."""
    return {
        "classical": "classical",
        "laurent": "Laurent",
        "r1": "R_I",
        "r2": "R_II",
    }[fam.pattern_name()]


def _cjson(z: complex):
    if abs(z.imag) == 0.0:
        return z.real
    return [z.real, z.imag]


def regularity_check(n: int, fam: FamilySpec, tol: float = 1e-12) -> dict:
    """Check that P_m does not vanish at the roots attached to index m, m <= n."""
    if fam.mode != "numeric":
        raise ModeMismatch("regularity_check needs a numeric family")
    cls = classify(fam)
    checks = []
    for m in range(1, n + 1):
        c = float(fam.value("c", m))
        a = float(fam.value("a", m))
        lam = float(fam.value("lambda", m))
        if c != 0.0:
            disc = cmath.sqrt(a * a - 4 * c * lam)
            roots = [(-a + disc) / (2 * c), (-a - disc) / (2 * c)]
        elif cls in ("R_I", "Laurent") and a != 0.0:
            roots = [complex(-lam / a)]
        else:
            continue
        P = compute_P(m, fam)
        values = [abs(P.evaluate(z, {})) for z in roots]
        checks.append({
            "m": m,
            "roots": [_cjson(z) for z in roots],
            "abs_values": values,
            "flagged": any(v <= tol for v in values),
        })
    return {
        "class": cls,
        "n": n,
        "tol": tol,
        "checks": checks,
        "regular": not any(ch["flagged"] for ch in checks),
    }


# -- good bases ---------------------------------------------------------------

def _relation(k: int, l: int, zp: Mapping[str, bool]):
    """Positions (n, m) of one multiplied recurrence relation with nonzero coefficients."""
    pos = []
    if not zp["c"]:
        pos.append((l + 2, k + 1))
    if not zp["a"]:
        pos.append((l + 1, k + 1))
    if not zp["lambda"]:
        pos.append((l, k + 1))
    pos.append((l + 1, k))
    if not zp["b"]:
        pos.append((l, k))
    if k >= 1:
        pos.append((l, k - 1))
    return pos


def good_basis_closure(S, zero_pattern: Mapping[str, bool] | FamilySpec,
                       box: tuple[int, int]) -> set:
    """Positions reachable from S by repeated single applications of the relation.

    ``S`` is a finite set of (n, m) pairs or a predicate on pairs. The search
    runs on a region larger than the box, since reaching a box position can
    pass through positions outside it, and the result is cut to the box.
    """
    if isinstance(zero_pattern, FamilySpec):
        zero_pattern = zero_pattern.zero_pattern
    zp = {f: bool(zero_pattern.get(f, False)) for f in FAMILIES}
    N, M = box
    NN, MM = N + 2 * (M + 1), M + 1

    def inside(p):
        return 0 <= p[0] <= NN and 0 <= p[1] <= MM

    if callable(S):
        known = {(n, m) for n in range(NN + 1) for m in range(MM + 1) if S(n, m)}
    else:
        known = {tuple(p) for p in S if inside(tuple(p))}
    relations = []
    for k in range(MM):
        for l in range(NN + 1):
            pos = _relation(k, l, zp)
            if all(inside(p) for p in pos):
                relations.append(pos)
    changed = True
    while changed:
        changed = False
        for pos in relations:
            missing = [p for p in pos if p not in known]
            if len(missing) == 1:
                known.add(missing[0])
                changed = True
    return {(n, m) for (n, m) in known if n <= N and m <= M}


def full_box(box: tuple[int, int]) -> set:
    N, M = box
    return {(n, m) for n in range(N + 1) for m in range(M + 1)}


PATTERNS = {
    "classical": {"a": True, "b": False, "c": True, "lambda": False},
    "laurent": {"a": False, "b": False, "c": True, "lambda": True},
    "r1": {"a": False, "b": False, "c": True, "lambda": False},
    "r2": {"a": False, "b": False, "c": False, "lambda": False},
}

# pattern name -> generating set of its good basis
GOOD_BASES: dict[str, Callable[[int, int], bool]] = {
    "classical": lambda n, m: m == 0,
    "laurent": lambda n, m: n == 0 or m == 0,
    "r1": lambda n, m: n == 0 or m == 0,
    "r2": lambda n, m: n <= 1 or m == 0,
}

__all__ = [
    "FamilySpec", "NumericSequence", "PolySeq", "SYMBOLIC", "compute_P", "compute_d",
    "leading_coeff", "classify", "regularity_check", "good_basis_closure", "full_box",
    "PATTERNS", "GOOD_BASES",
]
