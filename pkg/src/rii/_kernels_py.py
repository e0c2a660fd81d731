"""Pure-Python implementations of the hot kernels.

Every function here has a twin with the same signature in the compiled
``_kernels`` extension; :mod:`rii.kernels` picks one at import time.

Term dictionaries map a monomial key (a nondecreasing tuple of integer
variable codes, one entry per unit of exponent) to a nonzero coefficient.
A negative ``cap`` means "no truncation".
"""

import sys
from math import comb

# below the smallest normal double a relative test cannot succeed
TINY = sys.float_info.min


def _keylen(item):
    return len(item[0])


def mul_terms(a, b, cap):
    """Product of two term dicts, dropping monomials of total degree > cap."""
    if len(a) > len(b):
        a, b = b, a
    items_b = sorted(b.items(), key=_keylen)
    out = {}
    get = out.get
    if cap < 0:
        for ka, ca in a.items():
            for kb, cb in items_b:
                k = tuple(sorted(ka + kb))
                out[k] = get(k, 0) + ca * cb
    else:
        for ka, ca in a.items():
            room = cap - len(ka)
            if room < 0:
                continue
            for kb, cb in items_b:
                if len(kb) > room:
                    break
                k = tuple(sorted(ka + kb))
                out[k] = get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def mul_monomial(a, key, coeff, cap):
    """Multiply a term dict by ``coeff * monomial(key)``."""
    if not coeff:
        return {}
    room = len(key)
    out = {}
    for ka, ca in a.items():
        if 0 <= cap < len(ka) + room:
            continue
        k = tuple(sorted(ka + key)) if key else ka
        out[k] = ca * coeff
    return out


def const_moment_sum(n, a, b, c, lam, q, rtol, max_terms):
    """Sum the constant-coefficient moment series over its three indices.

    Returns ``(value, tail_bound, max_k, ok)`` where ``tail_bound`` bounds the
    discarded k-tails and ``ok`` is false when some tail hit ``max_terms``.
    """
    total = 0.0
    bound_total = 0.0
    max_k = 0
    ok = True
    for i in range(n // 2 + 1):
        for j in range(n - 2 * i + 1):
            m = n - 2 * i - j
            f0 = comb(2 * (i + j), i + j) // (i + j + 1) * comb(n + j, m) * comb(i + j, j)
            t = float(f0) * b ** m * lam ** i * a ** j
            if t == 0.0:
                continue
            s = t
            k = 0
            tail = 0.0
            while True:
                if c == 0.0:
                    break
                big_n = i + j + k
                big_a = n + j + 2 * k
                ratio = (
                    c
                    * (2.0 * (2 * big_n + 1) / (big_n + 2))
                    * ((big_a + 2.0) * (big_a + 1.0) / ((big_a + 2.0 - m) * (big_a + 1.0 - m)))
                    * ((big_n + 1.0) / (k + 1.0))
                )
                t = t * ratio
                k += 1
                s += t
                if abs(ratio) <= q:
                    tail = abs(t) * q / (1.0 - q)
                    if tail <= rtol * abs(s) or tail < TINY:
                        break
                if k >= max_terms:
                    ok = False
                    tail = abs(t) * q / (1.0 - q)
                    break
            total += s
            bound_total += tail
            if k > max_k:
                max_k = k
    return total, bound_total, max_k, ok


def motzkin_moment(n, B, Lam, A):
    """Weighted Motzkin (or Motzkin-Schroeder when ``A`` is given) path sum.

    ``B``, ``Lam`` and ``A`` are indexed by the starting height of the step and
    must have at least ``n + 2`` entries.
    """
    v = [0.0] * (n + 2)
    v[0] = 1.0
    for x in range(n):
        if A is not None:
            for h in range(x, 0, -1):
                v[h - 1] += v[h] * A[h]
        w = [0.0] * (n + 2)
        for h in range(x + 1):
            vh = v[h]
            if vh == 0.0:
                continue
            w[h + 1] += vh
            w[h] += vh * B[h]
            if h >= 1:
                w[h - 1] += vh * Lam[h]
        v = w
    if A is not None:
        for h in range(n, 0, -1):
            v[h - 1] += v[h] * A[h]
    return v[0]


def gf_coefficients(N, a, b, c, lam, mu0, root):
    """Taylor coefficients of the moment generating function up to x^N.

    ``mu0`` is the power-series root of ``mu0 = 1 + c*mu0**2`` and ``root`` is
    ``sqrt(1 - 4c)``, the coefficient of the linearised equation.
    """
    mu = [0.0] * (N + 1)
    mu[0] = mu0
    for n in range(1, N + 1):
        inner = 0.0
        for i in range(1, n):
            inner += mu[i] * mu[n - i]
        acc = b * mu[n - 1] + c * inner
        s1 = 0.0
        for i in range(n):
            s1 += mu[i] * mu[n - 1 - i]
        acc += a * s1
        if n >= 2:
            s2 = 0.0
            for i in range(n - 1):
                s2 += mu[i] * mu[n - 2 - i]
            acc += lam * s2
        mu[n] = acc / root
    return mu
