"""Exact sparse polynomials in the indexed variables a_i, b_i, c_i, lambda_i.

A monomial is stored as a nondecreasing tuple of integer variable codes with
one entry per unit of exponent, so its total degree is simply its length and
a product of monomials is a sorted concatenation. Every indexed variable has
grading degree 1; the indeterminate ``x`` of :class:`PolyInX` is not graded.

Truncation bounds ("caps") are nonnegative integers, with ``None`` meaning
no truncation at all.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Callable, Iterable, Mapping

from . import kernels
from .errors import NotAUnit, UnboundVariable

FAMILIES = ("a", "b", "c", "lambda")
_RANK = {f: i for i, f in enumerate(FAMILIES)}
_SHIFT = 24
_MASK = (1 << _SHIFT) - 1
_SHORT = {"a": "a", "b": "b", "c": "c", "lambda": "l"}
_FROM_SHORT = {"a": "a", "b": "b", "c": "c", "l": "lambda", "lambda": "lambda"}


@dataclass(frozen=True, order=True)
class Variable:
    """An indexed variable such as ``b_0`` or ``lambda_3``."""

    family: str
    index: int

    def __post_init__(self):
        if self.family not in _RANK:
            raise ValueError(f"unknown variable family {self.family!r}")
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"variable index must be a nonnegative int, got {self.index!r}")
        if self.index == 0 and self.family != "b":
            raise ValueError(f"family {self.family!r} starts at index 1")
        if self.index > _MASK:
            raise ValueError("variable index too large")

    @property
    def code(self) -> int:
        return (_RANK[self.family] << _SHIFT) | self.index

    @classmethod
    def from_code(cls, code: int) -> "Variable":
        return cls(FAMILIES[code >> _SHIFT], code & _MASK)

    def __str__(self):
        return f"{_SHORT[self.family]}{self.index}"


def var_code(family: str, index: int) -> int:
    return Variable(family, index).code


# -- monomials ---------------------------------------------------------------

def monomial_key(exponents: Mapping[Variable, int]) -> tuple:
    """Monomial key from a ``Variable -> exponent`` map."""
    key = []
    for v, e in exponents.items():
        if e < 0:
            raise ValueError("negative exponent")
        key.extend([v.code] * e)
    return tuple(sorted(key))


def monomial_exponents(key: tuple) -> dict:
    """``Variable -> exponent`` map of a monomial key (no zero exponents)."""
    return {Variable.from_code(c): len(list(g)) for c, g in groupby(key)}


def monomial_triples(key: tuple) -> tuple:
    """Sorted ``(family rank, index, exponent)`` triples of a monomial."""
    return tuple((c >> _SHIFT, c & _MASK, len(list(g))) for c, g in groupby(key))


def monomial_sort_key(key: tuple):
    # graded, then lexicographic on the sorted triples
    return (len(key), monomial_triples(key))


def monomial_str(key: tuple) -> str:
    parts = []
    for c, g in groupby(key):
        e = len(list(g))
        name = str(Variable.from_code(c))
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _coerce(value):
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, float):
        value = Fraction(repr(value))
    elif isinstance(value, str):
        value = Fraction(value.strip())
    else:
        value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


def _kcap(cap):
    return -1 if cap is None else cap


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, *, _trusted=False):
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for k, c in (terms or {}).items():
                c = _coerce(c)
                if c:
                    k = tuple(sorted(k))
                    clean[k] = clean.get(k, 0) + c
            self.terms = {k: c for k, c in clean.items() if c}
        self._hash = None

    # construction
    @classmethod
    def zero(cls) -> "Poly":
        return cls({}, _trusted=True)

    @classmethod
    def one(cls) -> "Poly":
        return cls({(): 1}, _trusted=True)

    @classmethod
    def const(cls, value) -> "Poly":
        value = _coerce(value)
        return cls({(): value} if value else {}, _trusted=True)

    @classmethod
    def var(cls, family: str, index: int) -> "Poly":
        return cls({(Variable(family, index).code,): 1}, _trusted=True)

    @classmethod
    def monomial(cls, exponents: Mapping[Variable, int], coeff=1) -> "Poly":
        return cls({monomial_key(exponents): coeff})

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return parse_poly(text)

    # basic queries
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        return max((len(k) for k in self.terms), default=-1)

    @property
    def min_degree(self) -> int:
        return min((len(k) for k in self.terms), default=-1)

    @property
    def constant_term(self):
        return self.terms.get((), 0)

    def coefficient(self, exponents: Mapping[Variable, int] | tuple):
        key = exponents if isinstance(exponents, tuple) else monomial_key(exponents)
        return self.terms.get(key, 0)

    def variables(self) -> set:
        return {Variable.from_code(c) for k in self.terms for c in k}

    def sorted_terms(self) -> list:
        """``(key, coeff)`` pairs in canonical monomial order."""
        return sorted(self.terms.items(), key=lambda kv: monomial_sort_key(kv[0]))

    def is_constant(self) -> bool:
        return all(not k for k in self.terms)

    # arithmetic
    def _other(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, float, str)) and not isinstance(other, bool):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        out = dict(self.terms)
        for k, c in o.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, factor) -> "Poly":
        factor = _coerce(factor)
        if not factor:
            return Poly.zero()
        if factor == 1:
            return self
        return Poly({k: c * factor for k, c in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul_trunc(other, None)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.scale(o.constant_term)

    __rmul__ = __mul__

    def mul_trunc(self, other: "Poly", cap: int | None) -> "Poly":
        """Product with all monomials of total degree > cap removed."""
        if not self.terms or not other.terms:
            return Poly.zero()
        if len(other.terms) == 1:
            (k, c), = other.terms.items()
            return Poly(kernels.mul_monomial(self.terms, k, c, _kcap(cap)), _trusted=True)
        if len(self.terms) == 1:
            (k, c), = self.terms.items()
            return Poly(kernels.mul_monomial(other.terms, k, c, _kcap(cap)), _trusted=True)
        return Poly(kernels.mul_terms(self.terms, other.terms, _kcap(cap)), _trusted=True)

    def __pow__(self, e: int):
        return self.pow_trunc(e, None)

    def pow_trunc(self, e: int, cap: int | None) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = Poly.one().truncate(cap)
        base = self.truncate(cap)
        while e:
            if e & 1:
                result = result.mul_trunc(base, cap)
            e >>= 1
            if e:
                base = base.mul_trunc(base, cap)
        return result

    def truncate(self, cap: int | None) -> "Poly":
        if cap is None:
            return self
        if all(len(k) <= cap for k in self.terms):
            return self
        return Poly({k: c for k, c in self.terms.items() if len(k) <= cap}, _trusted=True)

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly({k: c for k, c in self.terms.items() if len(k) == degree}, _trusted=True)

    def divide_by_variable(self, v: Variable) -> tuple["Poly", "Poly"]:
        """Exact monomial division by ``v``: returns ``(quotient, remainder)``."""
        code = v.code
        q, r = {}, {}
        for k, c in self.terms.items():
            try:
                pos = k.index(code)
            except ValueError:
                r[k] = c
            else:
                q[k[:pos] + k[pos + 1:]] = c
        return Poly(q, _trusted=True), Poly(r, _trusted=True)

    # substitution
    def substitute(self, mapping: Mapping[Variable, object] | Callable) -> "Poly":
        """Replace variables by polynomials or numbers.

        ``mapping`` is a dict or a callable returning the replacement for a
        variable, or ``None`` to keep the variable.
        """
        lookup = mapping if callable(mapping) else mapping.get
        cache = {}

        def image(code):
            if code not in cache:
                rep = lookup(Variable.from_code(code))
                if rep is None:
                    cache[code] = Poly({(code,): 1}, _trusted=True)
                elif isinstance(rep, Poly):
                    cache[code] = rep
                elif isinstance(rep, Variable):
                    cache[code] = Poly({(rep.code,): 1}, _trusted=True)
                else:
                    cache[code] = Poly.const(rep)
            return cache[code]

        out = Poly.zero()
        for k, c in self.terms.items():
            term = Poly.const(c)
            for code, g in groupby(k):
                term = term * image(code) ** len(list(g))
                if not term:
                    break
            out = out + term
        return out

    def zero_families(self, *families: str) -> "Poly":
        """Set every variable of the given families to zero."""
        ranks = {_RANK[f] for f in families}
        return Poly(
            {k: c for k, c in self.terms.items() if not any((x >> _SHIFT) in ranks for x in k)},
            _trusted=True,
        )

    def collapse(self) -> "Poly":
        """Constant-coefficient substitution a_i->a_1, b_i->b_0, c_i->c_1, lambda_i->lambda_1."""
        rep = {0: 1, 1: 0, 2: 1, 3: 1}
        out = {}
        for k, c in self.terms.items():
            nk = tuple(sorted(((x >> _SHIFT) << _SHIFT) | rep[x >> _SHIFT] for x in k))
            out[nk] = out.get(nk, 0) + c
        return Poly({k: c for k, c in out.items() if c}, _trusted=True)

    # comparison
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # evaluation
    def evaluate(self, assignment: Mapping[Variable, float]) -> float:
        return evaluate(self, assignment)

    # rendering / serialization
    def __str__(self):
        return format_terms(self.sorted_terms())

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def to_json(self) -> list:
        return [
            {"coeff": _coeff_str(c), "mono": [list(_triple_json(t)) for t in monomial_triples(k)]}
            for k, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "Poly":
        terms = {}
        for entry in data:
            key = _key_from_json(entry["mono"])
            terms[key] = terms.get(key, 0) + Fraction(entry["coeff"])
        return cls(terms)


def _triple_json(t):
    rank, index, exp = t
    return FAMILIES[rank], index, exp


def _key_from_json(mono) -> tuple:
    key = []
    for family, index, exp in mono:
        if exp <= 0:
            raise ValueError("exponents must be positive")
        key.extend([Variable(family, index).code] * exp)
    return tuple(sorted(key))


def _coeff_str(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_terms(items) -> str:
    if not items:
        return "0"
    out = []
    for n, (k, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        if not k:
            body = _coeff_str(a)
        elif a == 1:
            body = monomial_str(k)
        else:
            body = f"{_coeff_str(a)}*{monomial_str(k)}"
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>(?:lambda|[abcl])_?\d+)|(?P<op>[-+*^]))"
)


def parse_poly(text: str) -> Poly:
    """Parse the text form, e.g. ``"1 - c1 + 2*a1*b0^2 + 1/2*l3"``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = m.end()
        tokens.append((m.lastgroup, m.group(m.lastgroup)))
    terms = {}
    i = 0
    sign = 1
    expect_term = True
    coeff, key = Fraction(1), []
    have_factor = False

    def flush():
        k = tuple(sorted(key))
        terms[k] = terms.get(k, 0) + sign * coeff

    while i < len(tokens):
        kind, val = tokens[i]
        if kind == "op" and val in "+-" and not have_factor:
            if val == "-":
                sign = -sign
            i += 1
            continue
        if kind == "op" and val in "+-":
            flush()
            sign = 1 if val == "+" else -1
            coeff, key, have_factor = Fraction(1), [], False
            i += 1
            continue
        if kind == "op" and val == "*":
            i += 1
            continue
        if kind == "num":
            coeff *= Fraction(val)
            have_factor = True
            i += 1
            continue
        if kind == "var":
            m = re.fullmatch(r"(lambda|[abcl])_?(\d+)", val)
            code = Variable(_FROM_SHORT[m.group(1)], int(m.group(2))).code
            e = 1
            if i + 2 < len(tokens) + 1 and i + 1 < len(tokens) and tokens[i + 1] == ("op", "^"):
                e = int(tokens[i + 2][1])
                i += 2
            key.extend([code] * e)
            have_factor = True
            i += 1
            continue
        raise ValueError(f"unexpected token {val!r}")
    if have_factor:
        flush()
    elif expect_term and terms == {} and text not in ("", "0"):
        raise ValueError(f"empty polynomial text {text!r}")
    return Poly(terms)


def poly_mul_trunc(p: Poly, q: Poly, cap: int | None) -> Poly:
    return p.mul_trunc(q, cap)


@dataclass(frozen=True)
class TruncatedSeries:
    """A power series known modulo monomials of total degree > ``cap``."""

    body: Poly
    cap: int | None

    def __post_init__(self):
        if self.cap is not None and self.cap < 0:
            raise ValueError("cap must be nonnegative")
        object.__setattr__(self, "body", self.body.truncate(self.cap))

    def _cap_with(self, other_cap):
        if self.cap is None:
            return other_cap
        if other_cap is None:
            return self.cap
        return min(self.cap, other_cap)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.body + other.body, self._cap_with(other.cap))
        return TruncatedSeries(self.body + other, self.cap)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.body - other.body, self._cap_with(other.cap))
        return TruncatedSeries(self.body - other, self.cap)

    def __neg__(self):
        return TruncatedSeries(-self.body, self.cap)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            cap = self._cap_with(other.cap)
            return TruncatedSeries(self.body.mul_trunc(other.body, cap), cap)
        if isinstance(other, Poly):
            return TruncatedSeries(self.body.mul_trunc(other, self.cap), self.cap)
        return TruncatedSeries(self.body * other, self.cap)

    def __str__(self):
        return str(self.body)

    def to_json(self) -> dict:
        return {"cap": self.cap, "series": self.body.to_json()}


def series_invert(p: Poly, cap: int | None) -> TruncatedSeries:
    """Inverse of ``p`` as a power series, modulo degree > cap."""
    c0 = p.constant_term
    if not c0:
        raise NotAUnit(f"constant term of {p} is zero")
    inv0 = Fraction(1) / Fraction(c0)
    if cap is None:
        if not p.is_constant():
            raise ValueError("a nonconstant series has no finite inverse; give a cap")
        return TruncatedSeries(Poly.const(inv0), None)
    # p = c0 * (1 - u) with u free of constant term, so 1/p = inv0 * sum u^k
    u = (Poly.one() - p.scale(inv0)).truncate(cap)
    q = Poly.one()
    for _ in range(cap):
        q = (Poly.one() + u.mul_trunc(q, cap))
    return TruncatedSeries(q.scale(inv0), cap)


def evaluate(p: Poly, assignment: Mapping[Variable, float]) -> float:
    """Floating-point value of ``p``, summing in canonical monomial order."""
    total = 0.0
    cache = {}
    for k, c in p.sorted_terms():
        term = float(c)
        for code in k:
            if code not in cache:
                v = Variable.from_code(code)
                try:
                    cache[code] = float(assignment[v])
                except KeyError:
                    raise UnboundVariable(str(v)) from None
            term *= cache[code]
        total += term
    return total


class PolyInX:
    """Polynomial in ``x`` with :class:`Poly` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Poly] | None = None):
        clean = {}
        for e, p in (coeffs or {}).items():
            if e < 0:
                raise ValueError("negative x exponent")
            if not isinstance(p, Poly):
                p = Poly.const(p)
            if p:
                clean[e] = p
        self.coeffs = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: Poly.one()})

    @classmethod
    def x(cls, power: int = 1, coeff: Poly | None = None):
        return cls({power: coeff if coeff is not None else Poly.one()})

    @classmethod
    def constant(cls, p: Poly):
        return cls({0: p})

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def coeff(self, e: int) -> Poly:
        return self.coeffs.get(e, Poly.zero())

    def leading(self) -> Poly:
        return self.coeff(self.degree)

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, PolyInX):
            other = PolyInX.constant(other if isinstance(other, Poly) else Poly.const(other))
        out = dict(self.coeffs)
        for e, p in other.coeffs.items():
            out[e] = out[e] + p if e in out else p
        return PolyInX(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyInX({e: -p for e, p in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, PolyInX):
            other = PolyInX.constant(other if isinstance(other, Poly) else Poly.const(other))
        return self + (-other)

    def __mul__(self, other):
        return self.mul(other, None)

    def __rmul__(self, other):
        return self.mul(other, None)

    def mul(self, other, cap: int | None = None) -> "PolyInX":
        """Product in x with every coefficient truncated at ``cap``."""
        if isinstance(other, PolyInX):
            out = {}
            for e1, p1 in self.coeffs.items():
                for e2, p2 in other.coeffs.items():
                    prod = p1.mul_trunc(p2, cap)
                    if prod:
                        e = e1 + e2
                        out[e] = out[e] + prod if e in out else prod
            return PolyInX(out)
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return PolyInX({e: p.mul_trunc(other, cap) for e, p in self.coeffs.items()})

    def shift(self, k: int) -> "PolyInX":
        """Multiply by ``x**k``."""
        return PolyInX({e + k: p for e, p in self.coeffs.items()})

    def truncate(self, cap: int | None) -> "PolyInX":
        return PolyInX({e: p.truncate(cap) for e, p in self.coeffs.items()})

    def map_coeffs(self, f: Callable[[Poly], Poly]) -> "PolyInX":
        return PolyInX({e: f(p) for e, p in self.coeffs.items()})

    def evaluate(self, x, assignment: Mapping[Variable, float]):
        """Horner evaluation at a (possibly complex) point ``x``."""
        acc = 0.0
        for e in range(self.degree, -1, -1):
            acc = acc * x + evaluate(self.coeff(e), assignment) if e in self.coeffs else acc * x
        return acc

    def __eq__(self, other):
        if isinstance(other, PolyInX):
            return self.coeffs == other.coeffs
        if isinstance(other, (Poly, int, Fraction)):
            return self == PolyInX.constant(other if isinstance(other, Poly) else Poly.const(other))
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            xs = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            p = self.coeffs[e]
            if not xs:
                parts.append(f"({p})")
            elif p == 1:
                parts.append(xs)
            else:
                parts.append(f"({p})*{xs}")
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyInX({str(self)!r})"

    def to_json(self) -> list:
        out = []
        for e in sorted(self.coeffs):
            for entry in self.coeffs[e].to_json():
                out.append({"xdeg": e, **entry})
        return out

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "PolyInX":
        groups = {}
        for entry in data:
            groups.setdefault(int(entry["xdeg"]), []).append(entry)
        return cls({e: Poly.from_json(g) for e, g in groups.items()})


def polyx_mul(f: PolyInX, g: PolyInX, cap: int | None) -> PolyInX:
    return f.mul(g, cap)
