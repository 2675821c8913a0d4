"""Exact arithmetic on the formal n-disk at finite jet truncation.

Values are polynomial representatives of the quotient ring
Q[[t_1..t_n]] / m^(K+1): a :class:`JetSeries` stores a sparse map from
exponent multi-indices to exact scalars, and every binary operation
requires matching rank n and truncation order K.  Forms, vector fields,
matrices and automorphism jets are thin containers over JetSeries with
the usual Cartan calculus.

Truncation semantics worth remembering:

* products drop terms above order K (quotient semantics, exact);
* ``jet_partial`` is exact on the stored representative, but as a
  statement about a genuine power series it is only trustworthy to
  order K-1 -- build inputs one order higher when that matters;
* ``poincare_homotopy`` multiplies by coordinates, so its output is
  reported at order K+1 to keep ``d h(w) = w`` exact.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from fractions import Fraction

from . import _kernel
from .errors import ClosednessError, InvertibilityError, ShapeError
from .scalars import is_unit, rat, scalar_inv


def _check_same(a, b):
    if a.n != b.n or a.order != b.order:
        raise ShapeError(
            f"rank/order mismatch: ({a.n},{a.order}) vs ({b.n},{b.order})")


class JetSeries:
    """Truncated formal power series in t_1..t_n with exact coefficients."""

    __slots__ = ("n", "order", "coeffs")

    def __init__(self, n, order, coeffs=None, _clean=False):
        if n < 1:
            raise ShapeError("rank must be >= 1")
        if order < 0:
            raise ShapeError("truncation order must be >= 0")
        self.n = n
        self.order = order
        if coeffs is None:
            self.coeffs = {}
        elif _clean:
            self.coeffs = coeffs
        else:
            clean = {}
            for e, c in coeffs.items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ShapeError(f"bad exponent {e} for rank {n}")
                if sum(e) > order or not c:
                    continue
                clean[e] = (clean[e] + c) if e in clean else c
            self.coeffs = {e: c for e, c in clean.items() if c}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n, order):
        return cls(n, order, {}, _clean=True)

    @classmethod
    def const(cls, n, order, value):
        value = value if not isinstance(value, (int, str)) else rat(value)
        if not value:
            return cls.zero(n, order)
        return cls(n, order, {(0,) * n: value}, _clean=True)

    @classmethod
    def one(cls, n, order):
        return cls.const(n, order, Fraction(1))

    @classmethod
    def variable(cls, n, order, i, power=1):
        """The monomial t_i^power (i is 1-based)."""
        if not 1 <= i <= n:
            raise ShapeError(f"variable index {i} out of range 1..{n}")
        if power > order:
            return cls.zero(n, order)
        e = [0] * n
        e[i - 1] = power
        return cls(n, order, {tuple(e): Fraction(1)}, _clean=True)

    @classmethod
    def monomial(cls, n, order, exponents, coeff=Fraction(1)):
        return cls(n, order, {tuple(exponents): coeff})

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def constant_term(self):
        return self.coeffs.get((0,) * self.n, Fraction(0))

    def degree(self):
        """Total degree of the stored representative (-1 when zero)."""
        return max((sum(e) for e in self.coeffs), default=-1)

    def with_order(self, order):
        """Reinterpret the stored representative at another order.

        Raising the order is only meaningful for values known to be exact
        polynomials; lowering it truncates.
        """
        if order >= self.order:
            return JetSeries(self.n, order, dict(self.coeffs), _clean=True)
        return JetSeries(self.n, order,
                         {e: c for e, c in self.coeffs.items() if sum(e) <= order},
                         _clean=True)

    def map_coeffs(self, fn):
        out = {}
        for e, c in self.coeffs.items():
            v = fn(c)
            if v:
                out[e] = v
        return JetSeries(self.n, self.order, out, _clean=True)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JetSeries.const(self.n, self.order, rat(other))
        _check_same(self, other)
        out = dict(self.coeffs)
        _kernel.poly_axpy(out, other.coeffs, 1)
        return JetSeries(self.n, self.order, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return JetSeries(self.n, self.order,
                         {e: -c for e, c in self.coeffs.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-other if isinstance(other, JetSeries) else -rat(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, JetSeries):
            _check_same(self, other)
            return JetSeries(self.n, self.order,
                             _kernel.poly_mul(self.coeffs, other.coeffs, self.order),
                             _clean=True)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar):
        if isinstance(scalar, (int, str)):
            scalar = rat(scalar)
        if not scalar:
            return JetSeries.zero(self.n, self.order)
        out = {}
        for e, c in self.coeffs.items():
            v = scalar * c
            if v:
                out[e] = v
        return JetSeries(self.n, self.order, out, _clean=True)

    def __pow__(self, k):
        if k < 0:
            raise ShapeError("negative powers of jets are not defined here")
        out = JetSeries.one(self.n, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, JetSeries):
            return NotImplemented
        return (self.n, self.order) == (other.n, other.order) and \
            self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        from .grammar import format_jet
        return f"JetSeries({self.n},{self.order}; {format_jet(self)})"

    # -- calculus ------------------------------------------------------------

    def partial(self, i):
        """Formal d/dt_i, 1-based; exact on the stored representative."""
        if not 1 <= i <= self.n:
            raise ShapeError(f"direction {i} out of range 1..{self.n}")
        out = {}
        k = i - 1
        for e, c in self.coeffs.items():
            if e[k] == 0:
                continue
            e2 = e[:k] + (e[k] - 1,) + e[k + 1:]
            v = e[k] * c
            if e2 in out:
                v = out[e2] + v
            if v:
                out[e2] = v
        return JetSeries(self.n, self.order, out, _clean=True)

    def subs(self, args, order=None):
        """Substitute the JetSeries tuple ``args`` (zero constant terms) for
        the variables.  Result order defaults to min(self.order, args order)."""
        if len(args) != self.n:
            raise ShapeError("substitution needs one series per variable")
        m = args[0].n
        aorder = args[0].order
        for g in args:
            if g.n != m or g.order != aorder:
                raise ShapeError("substitution arguments must share rank/order")
            if g.constant_term():
                raise InvertibilityError(
                    "substitution requires zero constant terms")
        res_order = min(self.order, aorder) if order is None else order
        pow_cache = [[JetSeries.one(m, res_order)] for _ in range(self.n)]
        out = JetSeries.zero(m, res_order)
        for e, c in sorted(self.coeffs.items()):
            term = JetSeries.one(m, res_order)
            for i, k in enumerate(e):
                cache = pow_cache[i]
                while len(cache) <= k:
                    cache.append(cache[-1] * args[i].with_order(res_order))
                term = term * cache[k]
            out = out + term.scale(c)
        return out

    def eval_float(self, point):
        """Evaluate the representative at a numeric point (testing aid)."""
        total = 0.0
        for e, c in self.coeffs.items():
            v = float(c)
            for x, k in zip(point, e):
                v *= x ** k
            total += v
        return total


# -- spec-named operations ----------------------------------------------------

def jet_mul(a: JetSeries, b: JetSeries) -> JetSeries:
    """Product in the truncated ring; commutative and associative there."""
    return a * b


def jet_partial(a: JetSeries, i: int) -> JetSeries:
    return a.partial(i)


class FormalForm:
    """Differential k-form with JetSeries coefficients.

    Only strictly increasing index tuples are stored, so antisymmetry is
    canonical.  Degree 0 forms store their single coefficient at key ().
    """

    __slots__ = ("n", "order", "degree", "comps")

    def __init__(self, n, order, degree, comps=None):
        if degree < 0:
            raise ShapeError("form degree must be >= 0")
        if degree > n:  # above top degree only the zero form exists
            comps = {}
        self.n = n
        self.order = order
        self.degree = degree
        clean = {}
        for idx, f in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise ShapeError(f"component index {idx} must be strictly increasing")
            if any(not 1 <= i <= n for i in idx):
                raise ShapeError(f"component index {idx} out of range")
            if f.n != n or f.order != order:
                raise ShapeError("component rank/order mismatch")
            if not f.is_zero():
                clean[idx] = f
        self.comps = clean

    @classmethod
    def zero(cls, n, order, degree=0):
        return cls(n, order, degree, {})

    @classmethod
    def from_jet(cls, f: JetSeries):
        return cls(f.n, f.order, 0, {(): f})

    @classmethod
    def dt(cls, n, order, i):
        return cls(n, order, 1, {(i,): JetSeries.one(n, order)})

    def component(self, idx):
        idx = tuple(idx)
        return self.comps.get(idx, JetSeries.zero(self.n, self.order))

    def is_zero(self):
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def with_order(self, order):
        return FormalForm(self.n, order, self.degree,
                          {i: f.with_order(order) for i, f in self.comps.items()})

    def map_coeffs(self, fn):
        return FormalForm(self.n, self.order, self.degree,
                          {i: f.map_coeffs(fn) for i, f in self.comps.items()})

    def __add__(self, other):
        _check_same(self, other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ShapeError("cannot add forms of different degree")
        out = dict(self.comps)
        for idx, f in other.comps.items():
            g = out.get(idx)
            out[idx] = f if g is None else g + f
        return FormalForm(self.n, self.order, self.degree, out)

    def __neg__(self):
        return FormalForm(self.n, self.order, self.degree,
                          {i: -f for i, f in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        return FormalForm(self.n, self.order, self.degree,
                          {i: f.scale(scalar) for i, f in self.comps.items()})

    def scale_jet(self, f: JetSeries):
        return FormalForm(self.n, self.order, self.degree,
                          {i: g * f for i, g in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, FormalForm):
            return NotImplemented
        if (self.n, self.order) != (other.n, other.order):
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        return hash((self.n, self.order, self.degree,
                     frozenset(self.comps.items())))

    def __repr__(self):
        from .grammar import format_form
        return f"FormalForm({self.n},{self.order}; {format_form(self)})"


def _wedge_index(i_tuple, j_tuple):
    """Merge two increasing tuples; return (sign, merged) or None."""
    merged = i_tuple + j_tuple
    if len(set(merged)) != len(merged):
        return None
    perm = sorted(range(len(merged)), key=lambda k: merged[k])
    sign = 1
    perm = list(perm)
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign, tuple(sorted(merged))


def wedge(w1: FormalForm, w2: FormalForm) -> FormalForm:
    """Graded-commutative wedge; degrees above n collapse to zero."""
    _check_same(w1, w2)
    deg = w1.degree + w2.degree
    if deg > w1.n:
        return FormalForm.zero(w1.n, w1.order, w1.n)
    out = {}
    for i1, f1 in w1.comps.items():
        for i2, f2 in w2.comps.items():
            si = _wedge_index(i1, i2)
            if si is None:
                continue
            sign, idx = si
            term = (f1 * f2).scale(sign)
            if term.is_zero():
                continue
            g = out.get(idx)
            out[idx] = term if g is None else g + term
    return FormalForm(w1.n, w1.order, deg, out)


def de_rham(w: FormalForm) -> FormalForm:
    """Exterior derivative; d of a top-degree form is the zero (n)-form."""
    if w.degree >= w.n:
        return FormalForm.zero(w.n, w.order, w.n)
    out = {}
    for idx, f in w.comps.items():
        for i in range(1, w.n + 1):
            df = f.partial(i)
            if df.is_zero():
                continue
            si = _wedge_index((i,), idx)
            if si is None:
                continue
            sign, nidx = si
            term = df.scale(sign)
            g = out.get(nidx)
            out[nidx] = term if g is None else g + term
    return FormalForm(w.n, w.order, w.degree + 1, out)


class FormalVectorField:
    """Element of W_n: components are the coefficients of d/dt_i."""

    __slots__ = ("n", "order", "comps")

    def __init__(self, n, order, comps):
        comps = list(comps)
        if len(comps) != n:
            raise ShapeError("need one component per direction")
        for f in comps:
            if f.n != n or f.order != order:
                raise ShapeError("component rank/order mismatch")
        self.n = n
        self.order = order
        self.comps = comps

    @classmethod
    def zero(cls, n, order):
        return cls(n, order, [JetSeries.zero(n, order)] * n)

    @classmethod
    def monomial(cls, n, order, exponents, direction, coeff=Fraction(1)):
        """coeff * t^exponents d/dt_direction (direction 1-based)."""
        comps = [JetSeries.zero(n, order) for _ in range(n)]
        comps[direction - 1] = JetSeries.monomial(n, order, exponents, coeff)
        return cls(n, order, comps)

    def component(self, i):
        return self.comps[i - 1]

    def is_zero(self):
        return all(f.is_zero() for f in self.comps)

    def vanishes_at_origin(self):
        return all(not f.constant_term() for f in self.comps)

    def __add__(self, other):
        _check_same(self, other)
        return FormalVectorField(self.n, self.order,
                                 [a + b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return FormalVectorField(self.n, self.order, [-f for f in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        return FormalVectorField(self.n, self.order,
                                 [f.scale(scalar) for f in self.comps])

    def apply_to(self, f: JetSeries) -> JetSeries:
        """X(f) = sum_i X^i d f/dt_i."""
        out = JetSeries.zero(self.n, self.order)
        for i in range(1, self.n + 1):
            out = out + self.comps[i - 1] * f.partial(i)
        return out

    def __eq__(self, other):
        if not isinstance(other, FormalVectorField):
            return NotImplemented
        return (self.n, self.order) == (other.n, other.order) and \
            self.comps == other.comps

    def __hash__(self):
        return hash((self.n, self.order, tuple(self.comps)))

    def __repr__(self):
        from .grammar import format_vf
        return f"FormalVectorField({self.n},{self.order}; {format_vf(self)})"


def vf_bracket(x: FormalVectorField, y: FormalVectorField) -> FormalVectorField:
    """[X,Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i)."""
    _check_same(x, y)
    comps = []
    for i in range(1, x.n + 1):
        comps.append(x.apply_to(y.comps[i - 1]) - y.apply_to(x.comps[i - 1]))
    return FormalVectorField(x.n, x.order, comps)


def contract(x: FormalVectorField, w: FormalForm) -> FormalForm:
    """Interior product i_X."""
    _check_same(x, w)
    if w.degree == 0:
        return FormalForm.zero(w.n, w.order, 0)
    out = {}
    for idx, f in w.comps.items():
        for pos, i in enumerate(idx):
            xi = x.comps[i - 1]
            if xi.is_zero():
                continue
            term = (f * xi).scale((-1) ** pos)
            nidx = idx[:pos] + idx[pos + 1:]
            g = out.get(nidx)
            out[nidx] = term if g is None else g + term
    return FormalForm(w.n, w.order, w.degree - 1, out)


def lie_derivative(x: FormalVectorField, w: FormalForm) -> FormalForm:
    """Cartan formula L_X = d i_X + i_X d."""
    _check_same(x, w)
    return de_rham(contract(x, w)) + contract(x, de_rham(w))


class JetMatrix:
    """n x n matrix over the truncated ring."""

    __slots__ = ("n", "order", "entries")

    def __init__(self, n, order, entries):
        entries = [list(row) for row in entries]
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ShapeError("matrix must be n x n")
        for row in entries:
            for f in row:
                if f.n != n or f.order != order:
                    raise ShapeError("entry rank/order mismatch")
        self.n = n
        self.order = order
        self.entries = entries

    @classmethod
    def identity(cls, n, order):
        one, zero = JetSeries.one(n, order), JetSeries.zero(n, order)
        return cls(n, order, [[one if i == j else zero for j in range(n)]
                              for i in range(n)])

    @classmethod
    def from_scalar_matrix(cls, n, order, rows):
        return cls(n, order, [[JetSeries.const(n, order, rat(v)) for v in row]
                              for row in rows])

    def __add__(self, other):
        _check_same(self, other)
        return JetMatrix(self.n, self.order,
                         [[a + b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        _check_same(self, other)
        return JetMatrix(self.n, self.order,
                         [[a - b for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return JetMatrix(self.n, self.order,
                         [[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        _check_same(self, other)
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = JetSeries.zero(n, self.order)
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return JetMatrix(n, self.order, out)

    def constant_matrix(self):
        return [[f.constant_term() for f in row] for row in self.entries]

    def map_entries(self, fn):
        return JetMatrix(self.n, self.order,
                         [[fn(f) for f in row] for row in self.entries])

    def __eq__(self, other):
        if not isinstance(other, JetMatrix):
            return NotImplemented
        return (self.n, self.order) == (other.n, other.order) and \
            self.entries == other.entries

    def __repr__(self):
        return f"JetMatrix({self.n},{self.order})"


class JetAutomorphism:
    """Jet of a formal automorphism: components in the maximal ideal with an
    invertible linear part."""

    __slots__ = ("n", "order", "comps")

    def __init__(self, n, order, comps):
        comps = list(comps)
        if len(comps) != n:
            raise ShapeError("automorphism needs n components")
        for f in comps:
            if f.n != n or f.order != order:
                raise ShapeError("component rank/order mismatch")
            if f.constant_term():
                raise InvertibilityError(
                    "automorphism components must vanish at the origin")
        self.n = n
        self.order = order
        self.comps = comps
        lin = self.linear_part()
        if not _scalar_matrix_invertible(lin):
            raise InvertibilityError("linear part is singular")

    @classmethod
    def identity(cls, n, order):
        return cls(n, order, [JetSeries.variable(n, order, i)
                              for i in range(1, n + 1)])

    def linear_part(self):
        out = []
        for f in self.comps:
            row = []
            for j in range(self.n):
                e = tuple(1 if k == j else 0 for k in range(self.n))
                row.append(f.coeffs.get(e, Fraction(0)))
            out.append(row)
        return out

    def is_unipotent(self):
        lin = self.linear_part()
        return all(lin[i][j] == (1 if i == j else 0)
                   for i in range(self.n) for j in range(self.n))

    def __eq__(self, other):
        if not isinstance(other, JetAutomorphism):
            return NotImplemented
        return (self.n, self.order) == (other.n, other.order) and \
            self.comps == other.comps

    def __repr__(self):
        from .grammar import format_jet
        body = ", ".join(format_jet(f) for f in self.comps)
        return f"JetAutomorphism({self.n},{self.order}; ({body}))"


def _scalar_matrix_invertible(rows):
    return _scalar_matrix_inverse(rows) is not None


def _scalar_matrix_inverse(rows):
    """Gaussian elimination over the scalar ring; None when singular."""
    n = len(rows)
    a = [list(r) for r in rows]
    inv = [[rat(1) if i == j else rat(0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if is_unit(a[r][col]):
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = scalar_inv(a[col][col])
        a[col] = [d * v for v in a[col]]
        inv[col] = [d * v for v in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if not f:
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


def jet_compose(outer: JetAutomorphism, inner: JetAutomorphism) -> JetAutomorphism:
    """Substitution outer(inner(t)); result order is the min of the two."""
    if outer.n != inner.n:
        raise ShapeError("rank mismatch in composition")
    order = min(outer.order, inner.order)
    comps = [f.subs(tuple(inner.comps), order=order) for f in outer.comps]
    return JetAutomorphism(outer.n, order, comps)


def jacobian(phi: JetAutomorphism) -> JetMatrix:
    """Jac(phi)_ij = d phi_i / d t_j."""
    n = phi.n
    return JetMatrix(n, phi.order,
                     [[phi.comps[i].partial(j + 1) for j in range(n)]
                      for i in range(n)])


def _matrix_invert(m: JetMatrix) -> JetMatrix:
    """Neumann series around the inverse of the constant-term matrix."""
    inv0 = _scalar_matrix_inverse(m.constant_matrix())
    if inv0 is None:
        raise InvertibilityError("constant term of matrix is singular")
    n, order = m.n, m.order
    m0inv = JetMatrix(n, order,
                      [[JetSeries.const(n, order, v) for v in row]
                       for row in inv0])
    nil = m0inv * m - JetMatrix.identity(n, order)  # entries in the ideal
    acc = JetMatrix.identity(n, order)
    power = JetMatrix.identity(n, order)
    sign = 1
    for _ in range(order):
        power = power * nil
        sign = -sign
        if all(f.is_zero() for row in power.entries for f in row):
            break
        acc = acc + power.map_entries(lambda f, s=sign: f.scale(s))
    return acc * m0inv


def _automorphism_invert(phi: JetAutomorphism) -> JetAutomorphism:
    """Order-by-order solve of phi(psi(t)) = t from the linear part down."""
    n, order = phi.n, phi.order
    ainv = _scalar_matrix_inverse(phi.linear_part())
    if ainv is None:
        raise InvertibilityError("linear part is singular")
    high = []  # degree >= 2 part of phi
    for f in phi.comps:
        high.append(JetSeries(n, order,
                              {e: c for e, c in f.coeffs.items() if sum(e) >= 2},
                              _clean=True))

    def lin_solve(rhs):
        # psi_i = sum_j ainv[i][j] rhs_j
        return [sum((rhs[j].scale(ainv[i][j]) for j in range(n)),
                    JetSeries.zero(n, order))
                for i in range(n)]

    t_vars = [JetSeries.variable(n, order, i + 1) for i in range(n)]
    psi = lin_solve(t_vars)
    for _ in range(order):
        corr = [h.subs(tuple(psi), order=order) for h in high]
        psi = lin_solve([t_vars[j] - corr[j] for j in range(n)])
    return JetAutomorphism(n, order, psi)


def jet_invert(x):
    """Two-sided inverse to order K of a JetMatrix or JetAutomorphism."""
    if isinstance(x, JetMatrix):
        return _matrix_invert(x)
    if isinstance(x, JetAutomorphism):
        return _automorphism_invert(x)
    raise ShapeError(f"cannot invert {type(x).__name__}")


def poincare_homotopy(w: FormalForm, check=True) -> FormalForm:
    """Radial (Euler-operator) homotopy h with d h(w) = w for closed w.

    Uses the standard coordinates: h(t^a dt_I) multiplies by coordinates and
    divides by (|a| + k), so the result is reported at order K+1 to keep the
    identity exact on the stored representative.
    """
    if w.degree < 1:
        raise ShapeError("homotopy needs a form of degree >= 1")
    if check and not de_rham(w).is_zero():
        raise ClosednessError("poincare_homotopy requires a closed form")
    n, order = w.n, w.order + 1
    out = FormalForm.zero(n, order, w.degree - 1)
    k = w.degree
    for idx, f in w.comps.items():
        for e, c in f.coeffs.items():
            d = sum(e)
            coef = c / (d + k)
            for pos, i in enumerate(idx):
                e2 = list(e)
                e2[i - 1] += 1
                nidx = idx[:pos] + idx[pos + 1:]
                mono = JetSeries.monomial(n, order, e2,
                                          coef * ((-1) ** pos))
                out = out + FormalForm(n, order, k - 1, {nidx: mono})
    return out


def integrate_var(f: JetSeries, i: int) -> JetSeries:
    """Monomial antiderivative in t_i, vanishing at t_i = 0; order rises by 1."""
    if not 1 <= i <= f.n:
        raise ShapeError(f"direction {i} out of range 1..{f.n}")
    out = {}
    k = i - 1
    for e, c in f.coeffs.items():
        e2 = e[:k] + (e[k] + 1,) + e[k + 1:]
        out[e2] = c / (e[k] + 1)
    return JetSeries(f.n, f.order + 1, out, _clean=True)


def staircase_primitive(w: FormalForm, check=True) -> FormalForm:
    """A non-radial primitive of a closed 2-form, by iterated t_a-integration.

    Used as an independent counterpart to :func:`poincare_homotopy`: the two
    primitives differ by an exact form.  Result order is K+1.
    """
    if w.degree != 2:
        raise ShapeError("staircase_primitive expects a two-form")
    if check and not de_rham(w).is_zero():
        raise ClosednessError("staircase_primitive requires a closed form")
    n, order = w.n, w.order + 1
    theta = FormalForm.zero(n, order, 1)
    rem = w.with_order(order)
    for a in range(1, n):
        comps = {}
        for (i1, i2), f in rem.comps.items():
            if i1 != a:
                continue
            g = integrate_var(f, a).with_order(order)
            if (i2,) in comps:
                comps[(i2,)] = comps[(i2,)] + g
            else:
                comps[(i2,)] = g
        if not comps:
            continue
        part = FormalForm(n, order, 1, comps)
        theta = theta + part
        rem = rem - de_rham(part)
    if not rem.is_zero():
        raise ClosednessError("staircase integration left a residual; "
                              "input was not closed at this truncation")
    return theta


def pullback_form(phi: JetAutomorphism, w: FormalForm) -> FormalForm:
    """phi^*(f dt_I) = (f o phi) d phi_{i1} ^ ... ^ d phi_{ik}."""
    if phi.n != w.n:
        raise ShapeError("rank mismatch in pullback")
    order = min(phi.order, w.order)
    n = phi.n
    dphi = []
    for i in range(n):
        comps = {}
        for j in range(1, n + 1):
            g = phi.comps[i].partial(j).with_order(order)
            if not g.is_zero():
                comps[(j,)] = g
        dphi.append(FormalForm(n, order, 1, comps))
    out = FormalForm.zero(n, order, w.degree)
    args = tuple(f.with_order(order) for f in phi.comps)
    for idx, f in w.comps.items():
        term = FormalForm.from_jet(f.with_order(order).subs(args, order=order))
        for i in idx:
            term = wedge(term, dphi[i - 1])
        out = out + term
    return out


def pullback_jet(phi: JetAutomorphism, f: JetSeries) -> JetSeries:
    order = min(phi.order, f.order)
    return f.with_order(order).subs(
        tuple(g.with_order(order) for g in phi.comps), order=order)


class FormMatrix:
    """n x n matrix of FormalForms (mixed degrees allowed per entry)."""

    __slots__ = ("n", "order", "entries")

    def __init__(self, n, order, entries):
        entries = [list(row) for row in entries]
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ShapeError("matrix must be n x n")
        self.n = n
        self.order = order
        self.entries = entries

    @classmethod
    def from_jet_matrix(cls, m: JetMatrix):
        return cls(m.n, m.order,
                   [[FormalForm.from_jet(f) for f in row] for row in m.entries])

    @classmethod
    def de_rham_of(cls, m: JetMatrix):
        return cls(m.n, m.order,
                   [[de_rham(FormalForm.from_jet(f)) for f in row]
                    for row in m.entries])

    def wedge_mul(self, other: "FormMatrix") -> "FormMatrix":
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    term = wedge(self.entries[i][k], other.entries[k][j])
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return FormMatrix(n, self.order, out)

    def trace(self) -> FormalForm:
        acc = None
        for i in range(self.n):
            acc = self.entries[i][i] if acc is None else acc + self.entries[i][i]
        return acc

    def scale_jet_left(self, m: JetMatrix) -> "FormMatrix":
        """Matrix product m . self with scalar-jet entries on the left."""
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    term = self.entries[k][j].scale_jet(m.entries[i][k])
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return FormMatrix(n, self.order, out)

    def scale_jet_right(self, m: JetMatrix) -> "FormMatrix":
        """Matrix product self . m with scalar-jet entries on the right."""
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    term = self.entries[i][k].scale_jet(m.entries[k][j])
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return FormMatrix(n, self.order, out)

    def map_entries(self, fn):
        return FormMatrix(self.n, self.order,
                          [[fn(f) for f in row] for row in self.entries])


def monomial_exponents(n, max_degree, min_degree=0):
    """Exponent tuples e in N^n with min_degree <= |e| <= max_degree."""
    def gen(prefix, remaining_slots, budget):
        if remaining_slots == 0:
            yield prefix
            return
        for k in range(budget + 1):
            yield from gen(prefix + (k,), remaining_slots - 1, budget - k)

    return [e for e in gen((), n, max_degree) if sum(e) >= min_degree]


def basis_monomial_fields(n, order, max_degree, min_degree=0):
    """All monomial vector fields t^a d_j with |a| <= max_degree (test aid)."""
    return [FormalVectorField.monomial(n, order, e, j)
            for e in monomial_exponents(n, max_degree, min_degree)
            for j in range(1, n + 1)]
