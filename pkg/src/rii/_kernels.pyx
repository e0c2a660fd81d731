# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the functions in ``_kernels_py``; same signatures and results."""

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from libc.math cimport fabs
from math import comb

# below the smallest normal double a relative test cannot succeed
cdef double TINY = 2.2250738585072014e-308


cdef tuple _merge(tuple a, tuple b):
    cdef Py_ssize_t na = len(a), nb = len(b), i = 0, j = 0, k = 0
    cdef object item
    if na == 0:
        return b
    if nb == 0:
        return a
    cdef tuple out = PyTuple_New(na + nb)
    while i < na and j < nb:
        if <long>a[i] <= <long>b[j]:
            item = a[i]
            i += 1
        else:
            item = b[j]
            j += 1
        Py_INCREF(item)
        PyTuple_SET_ITEM(out, k, item)
        k += 1
    while i < na:
        item = a[i]
        i += 1
        Py_INCREF(item)
        PyTuple_SET_ITEM(out, k, item)
        k += 1
    while j < nb:
        item = b[j]
        j += 1
        Py_INCREF(item)
        PyTuple_SET_ITEM(out, k, item)
        k += 1
    return out


def mul_terms(dict a, dict b, long cap):
    """Product of two term dicts, dropping monomials of total degree > cap."""
    if len(a) > len(b):
        a, b = b, a
    cdef list items_b = sorted(b.items(), key=lambda kv: len(kv[0]))
    cdef dict out = {}
    cdef tuple ka, kb, k
    cdef long room
    cdef Py_ssize_t nb = len(items_b), t
    for ka, ca in a.items():
        room = cap - len(ka) if cap >= 0 else -1
        if cap >= 0 and room < 0:
            continue
        for t in range(nb):
            kb, cb = items_b[t]
            if cap >= 0 and len(kb) > room:
                break
            k = _merge(ka, kb)
            v = out.get(k)
            if v is None:
                out[k] = ca * cb
            else:
                out[k] = v + ca * cb
    return {k: v for k, v in out.items() if v}


def mul_monomial(dict a, tuple key, coeff, long cap):
    """Multiply a term dict by ``coeff * monomial(key)``."""
    if not coeff:
        return {}
    cdef long extra = len(key)
    cdef dict out = {}
    cdef tuple ka
    for ka, ca in a.items():
        if cap >= 0 and len(ka) + extra > cap:
            continue
        out[_merge(ka, key)] = ca * coeff
    return out


def const_moment_sum(long n, double a, double b, double c, double lam, double q,
                     double rtol, long max_terms):
    cdef double total = 0.0, bound_total = 0.0, t, s, tail, ratio
    cdef long max_k = 0, i, j, m, k, big_n, big_a
    cdef bint ok = True
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
                if fabs(ratio) <= q:
                    tail = fabs(t) * q / (1.0 - q)
                    if tail <= rtol * fabs(s) or tail < TINY:
                        break
                if k >= max_terms:
                    ok = False
                    tail = fabs(t) * q / (1.0 - q)
                    break
            total += s
            bound_total += tail
            if k > max_k:
                max_k = k
    return total, bound_total, max_k, ok


def motzkin_moment(long n, B, Lam, A):
    cdef list v = [0.0] * (n + 2)
    cdef list w
    cdef long x, h
    cdef double vh
    cdef bint with_v = A is not None
    v[0] = 1.0
    for x in range(n):
        if with_v:
            for h in range(x, 0, -1):
                v[h - 1] = <double>v[h - 1] + <double>v[h] * <double>A[h]
        w = [0.0] * (n + 2)
        for h in range(x + 1):
            vh = v[h]
            if vh == 0.0:
                continue
            w[h + 1] = <double>w[h + 1] + vh
            w[h] = <double>w[h] + vh * <double>B[h]
            if h >= 1:
                w[h - 1] = <double>w[h - 1] + vh * <double>Lam[h]
        v = w
    if with_v:
        for h in range(n, 0, -1):
            v[h - 1] = <double>v[h - 1] + <double>v[h] * <double>A[h]
    return v[0]


def gf_coefficients(long N, double a, double b, double c, double lam, double mu0, double root):
    cdef list mu = [0.0] * (N + 1)
    cdef long n, i
    cdef double inner, acc, s1, s2
    mu[0] = mu0
    for n in range(1, N + 1):
        inner = 0.0
        for i in range(1, n):
            inner += <double>mu[i] * <double>mu[n - i]
        acc = b * <double>mu[n - 1] + c * inner
        s1 = 0.0
        for i in range(n):
            s1 += <double>mu[i] * <double>mu[n - 1 - i]
        acc += a * s1
        if n >= 2:
            s2 = 0.0
            for i in range(n - 1):
                s2 += <double>mu[i] * <double>mu[n - 2 - i]
            acc += lam * s2
        mu[n] = acc / root
    return mu
