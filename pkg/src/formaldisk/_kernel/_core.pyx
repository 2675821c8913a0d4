# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled mirror of formaldisk._kernel._pure.

Coefficients stay Python objects (exact Fractions or ring elements); the
speedup comes from C-level loops over the exponent tuples and symbol
monomials, which dominate the runtime of the mode recursion and of
truncated polynomial products.
"""

cimport cython


def poly_mul(dict a, dict b, long order):
    cdef dict out = {}
    cdef tuple ea, eb, key
    cdef long da, total, i, n
    cdef object ca, cb, c, prev
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        da = 0
        n = len(ea)
        for i in range(n):
            da += <long> ea[i]
        for eb, cb in b.items():
            total = da
            for i in range(n):
                total += <long> eb[i]
            if total > order:
                continue
            key = tuple([<long> ea[i] + <long> eb[i] for i in range(n)])
            c = ca * cb
            prev = out.get(key)
            if prev is not None:
                c = prev + c
            if c:
                out[key] = c
            elif prev is not None:
                del out[key]
    return out


def poly_axpy(dict acc, dict data, object coef):
    cdef tuple key
    cdef object c, v, prev
    for key, c in data.items():
        v = coef * c
        prev = acc.get(key)
        if prev is not None:
            v = prev + v
        if v:
            acc[key] = v
        elif prev is not None:
            del acc[key]
    return acc


cdef inline bint _key_le(tuple s, tuple t):
    # canonical order (kind, j, -m): s <= t
    cdef long a0 = <long> s[0], b0 = <long> t[0]
    if a0 != b0:
        return a0 < b0
    cdef long a1 = <long> s[1], b1 = <long> t[1]
    if a1 != b1:
        return a1 < b1
    return (-(<long> s[2])) <= (-(<long> t[2]))


def state_mul_sym(dict data, tuple sym):
    cdef dict out = {}
    cdef tuple mono
    cdef object c
    cdef long i, ln
    for mono, c in data.items():
        ln = len(mono)
        i = 0
        while i < ln and _key_le(<tuple> mono[i], sym):
            i += 1
        out[mono[:i] + (sym,) + mono[i:]] = c
    return out


def state_deriv_sym(dict data, tuple sym, long sign):
    cdef dict out = {}
    cdef tuple mono, key
    cdef object c, v, prev
    cdef long i, ln, mult, idx
    for mono, c in data.items():
        ln = len(mono)
        mult = 0
        idx = -1
        for i in range(ln):
            if <tuple> mono[i] == sym:
                mult += 1
                if idx < 0:
                    idx = i
        if mult == 0:
            continue
        key = mono[:idx] + mono[idx + 1:]
        v = (sign * mult) * c
        prev = out.get(key)
        if prev is not None:
            v = prev + v
        if v:
            out[key] = v
        elif prev is not None:
            del out[key]
    return out


def state_axpy(dict acc, dict data, object coef):
    cdef tuple key
    cdef object c, v, prev
    for key, c in data.items():
        v = coef * c
        prev = acc.get(key)
        if prev is not None:
            v = prev + v
        if v:
            acc[key] = v
        elif prev is not None:
            del acc[key]
    return acc
