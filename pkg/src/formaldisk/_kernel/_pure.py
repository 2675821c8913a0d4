"""Pure-Python implementations of the hot inner loops.

The compiled extension ``formaldisk._kernel._core`` mirrors these functions
one for one; ``formaldisk._kernel`` picks whichever is importable.  Both
operate on plain containers so they stay interchangeable:

* polynomials: dict mapping exponent tuples (length n) to coefficients,
* states: dict mapping sorted tuples of mode symbols to coefficients,

where a mode symbol is an int triple ``(kind, j, m)`` with kind 0 for b,
1 for c.  Coefficients are arbitrary ring elements (Fraction in the main
code path); only ``+``, ``*`` and truthiness are used.
"""


def poly_mul(a, b, order):
    """Truncated product of sparse exponent-dict polynomials.

    Exponent tuples with total degree above ``order`` are dropped; that is
    the quotient-ring semantics, not a loss of information.
    """
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > order:
                continue
            key = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb
            if key in out:
                c = out[key] + c
            if c:
                out[key] = c
            elif key in out:
                del out[key]
    return out


def poly_axpy(acc, data, coef):
    """In-place ``acc += coef * data`` for exponent-dict polynomials."""
    for key, c in data.items():
        v = coef * c
        if key in acc:
            v = acc[key] + v
        if v:
            acc[key] = v
        elif key in acc:
            del acc[key]
    return acc


def _sym_key(s):
    return (s[0], s[1], -s[2])


def state_mul_sym(data, sym):
    """Multiply every monomial of a state by the mode symbol ``sym``.

    Monomials are kept sorted by the canonical key (kind, j, -m); insertion
    is injective on monomials so no coefficient merging can occur.
    """
    sk = _sym_key(sym)
    out = {}
    for mono, c in data.items():
        i = 0
        ln = len(mono)
        while i < ln and _sym_key(mono[i]) <= sk:
            i += 1
        out[mono[:i] + (sym,) + mono[i:]] = c
    return out


def state_deriv_sym(data, sym, sign):
    """Apply ``sign * d/d(sym)`` to a state, symbols being even variables."""
    out = {}
    for mono, c in data.items():
        mult = 0
        idx = -1
        for i, s in enumerate(mono):
            if s == sym:
                mult += 1
                if idx < 0:
                    idx = i
        if not mult:
            continue
        key = mono[:idx] + mono[idx + 1:]
        v = (sign * mult) * c
        if key in out:
            v = out[key] + v
        if v:
            out[key] = v
        elif key in out:
            del out[key]
    return out


def state_axpy(acc, data, coef):
    """In-place ``acc += coef * data`` for symbol-monomial states."""
    for key, c in data.items():
        v = coef * c
        if key in acc:
            v = acc[key] + v
        if v:
            acc[key] = v
        elif key in acc:
            del acc[key]
    return acc
